#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>

#include "tsskew/errors.hpp"

namespace tsskew::detail {

// Integral over (a, b) of a function that may have integrable endpoint singularities.
template <class F>
double integrate_finite(F f, double a, double b, double tol = 1e-13) {
    boost::math::quadrature::tanh_sinh<double> ts;
    // Abscissas within 1e-100 of an endpoint can make x^{-Y-1} overflow while the numerator underflows;
    // the integrable singularity contributes nothing there.
    const double guard = 1e-100 * (b - a);
    auto g = [&](double x) {
        const double v = f(x);
        if (!std::isfinite(v) && (x - a < guard || b - x < guard)) return 0.0;
        return v;
    };
    double err = 0.0;
    double v = ts.integrate(g, a, b, tol, &err);
    if (!std::isfinite(v)) throw QuadratureError("finite-interval quadrature produced a non-finite value");
    return v;
}

// Integral over (0, inf), split at `split` so the singular and tail parts are handled separately.
template <class F>
double integrate_half_line(F f, double split = 1.0, double tol = 1e-13) {
    boost::math::quadrature::exp_sinh<double> es;
    double head = integrate_finite(f, 0.0, split, tol);
    double err = 0.0;
    double tail = es.integrate(
        [&](double x) {
            const double v = f(x + split);
            return !std::isfinite(v) && x > 1e100 ? 0.0 : v;
        },
        tol, &err);
    if (!std::isfinite(tail)) throw QuadratureError("half-line quadrature produced a non-finite value");
    return head + tail;
}

}  // namespace tsskew::detail
