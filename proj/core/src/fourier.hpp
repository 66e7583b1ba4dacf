#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tsskew/errors.hpp"

namespace tsskew::detail {

// Integral of g over (0, v_max): tanh-sinh on the first panel, which carries the
// v^Y branch point, then Gauss-Legendre panels no wider than a quarter period of
// exp(-i v z).
template <class G>
double oscillatory_integral(G g, double z, double v_max) {
    double h = 0.5;
    if (std::abs(z) > 0.0) h = std::min(h, 0.5 * std::numbers::pi / std::abs(z));
    boost::math::quadrature::tanh_sinh<double> ts;
    double head = ts.integrate(g, 0.0, h, 1e-14);
    double total = head;
    double a = h;
    while (a < v_max) {
        double b = std::min(a + h, v_max);
        total += boost::math::quadrature::gauss<double, 20>::integrate(g, a, b);
        a = b;
    }
    if (!std::isfinite(total)) throw QuadratureError("Fourier inversion did not converge");
    return total;
}

}  // namespace tsskew::detail
