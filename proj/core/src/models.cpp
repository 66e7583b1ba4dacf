#include "tsskew/models.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>

#include "quad.hpp"
#include "tsskew/errors.hpp"

namespace tsskew {

void TemperedStableParams::validate() const {
    if (!(c_plus >= 0.0) || !(c_minus >= 0.0)) throw DomainError("C(1) and C(-1) must be nonnegative");
    if (!(c_plus + c_minus > 0.0)) throw DomainError("C(1) + C(-1) must be positive");
    if (!(g_minus > 0.0)) throw DomainError("G must be positive");
    if (!(m_plus > 0.0)) throw DomainError("M must be positive");
    if (!(y_index > 1.0 && y_index < 2.0)) throw DomainError("Y must lie strictly inside (1,2)");
}

double gamma_neg(double y) {
    return std::tgamma(2.0 - y) / ((-y) * (1.0 - y));
}

namespace {

// e^z - 1 - z without cancellation for small z
double phi(double z) {
    if (std::abs(z) < 1e-2) {
        double term = 0.5 * z * z, sum = 0.0;
        for (int k = 3; k < 12; ++k) {
            sum += term;
            term *= z / k;
        }
        return sum;
    }
    return std::expm1(z) - z;
}

// int_0^1 x^{-Y} (1 - e^{-a x}) dx
double truncated_tail(double a, double y) {
    double lower = boost::math::tgamma_lower(2.0 - y, a);
    return (-std::expm1(-a) - std::pow(a, y - 1.0) * lower) / (1.0 - y);
}

}  // namespace

DerivedConstants derive_constants(const TemperedStableParams& p) {
    p.validate();
    if (!(p.m_plus > 1.0)) throw DomainError("M must exceed 1 for the closed form of gamma_tilde");
    const double y = p.y_index;
    const double gy = gamma_neg(y);
    DerivedConstants d;
    d.gamma_tilde = -gy * (p.c_plus * (std::pow(p.m_plus - 1.0, y) - std::pow(p.m_plus, y)) +
                           p.c_minus * (std::pow(p.g_minus + 1.0, y) - std::pow(p.g_minus, y)));
    d.eta = gy * (p.c_plus * std::pow(p.m_plus, y) + p.c_minus * std::pow(p.g_minus, y));
    d.b_drift = d.gamma_tilde - (p.c_plus - p.c_minus) / (y - 1.0) -
                p.c_plus * truncated_tail(p.m_plus, y) + p.c_minus * truncated_tail(p.g_minus, y);
    return d;
}

MartingaleReport validate_martingale(const TemperedStableParams& p) {
    MartingaleReport r;
    try {
        p.validate();
    } catch (const DomainError& e) {
        r.reason = e.what();
        return r;
    }
    if (!(p.m_plus > 1.0)) {
        r.reason = "exponential moment diverges (M <= 1)";
        return r;
    }
    r.b_drift = derive_constants(p).b_drift;
    double b_quad = b_drift_quadrature(p);
    if (std::abs(r.b_drift - b_quad) > 1e-8 * (1.0 + std::abs(b_quad))) {
        r.reason = "drift does not match the martingale condition";
        return r;
    }
    r.pass = true;
    r.reason = "ok";
    return r;
}

double gamma_tilde_quadrature(const TemperedStableParams& p) {
    p.validate();
    const double y = p.y_index, m = p.m_plus, g = p.g_minus;
    auto pos = [&](double x) { return (phi((1.0 - m) * x) - phi(-m * x)) * std::pow(x, -y - 1.0); };
    auto neg = [&](double u) { return (phi(-(1.0 + g) * u) - phi(-g * u)) * std::pow(u, -y - 1.0); };
    double ip = p.c_plus > 0.0 ? detail::integrate_half_line(pos) : 0.0;
    double in = p.c_minus > 0.0 ? detail::integrate_half_line(neg) : 0.0;
    return -(p.c_plus * ip + p.c_minus * in);
}

double gamma_tilde_from_drift(const TemperedStableParams& p, double b_drift) {
    const double y = p.y_index;
    auto tail = [y](double a) {
        return detail::integrate_finite([&](double x) { return -std::expm1(-a * x) * std::pow(x, -y); }, 0.0, 1.0);
    };
    return b_drift + (p.c_plus - p.c_minus) / (y - 1.0) + p.c_plus * tail(p.m_plus) - p.c_minus * tail(p.g_minus);
}

double eta_quadrature(const TemperedStableParams& p) {
    p.validate();
    const double y = p.y_index;
    auto term = [y](double a) {
        return detail::integrate_half_line(
            [&](double x) { return phi(-a * x) * std::pow(x, -y - 1.0); });
    };
    return p.c_plus * term(p.m_plus) + p.c_minus * term(p.g_minus);
}

double b_drift_quadrature(const TemperedStableParams& p) {
    p.validate();
    const double y = p.y_index, m = p.m_plus, g = p.g_minus;
    auto pos_near = [&](double x) { return phi(x) * std::exp(-m * x) * std::pow(x, -y - 1.0); };
    auto neg_near = [&](double u) { return phi(-u) * std::exp(-g * u) * std::pow(u, -y - 1.0); };
    double ip = detail::integrate_finite(pos_near, 0.0, 1.0);
    double in = detail::integrate_finite(neg_near, 0.0, 1.0);
    boost::math::quadrature::exp_sinh<double> es;
    double err = 0.0;
    ip += es.integrate(
        [&](double x) {
            x += 1.0;
            return (std::exp((1.0 - m) * x) - std::exp(-m * x)) * std::pow(x, -y - 1.0);
        },
        1e-13, &err);
    in += es.integrate([&](double u) { u += 1.0; return std::expm1(-u) * std::exp(-g * u) * std::pow(u, -y - 1.0); },
                       1e-13, &err);
    return -(p.c_plus * ip + p.c_minus * in);
}

void StochVolSpec::validate() const {
    if (!mu_fn || !sigma_fn || !alpha_fn || !gamma_fn || !sigma_prime_fn)
        throw DomainError("stochastic volatility spec is missing a coefficient function");
    if (!(rho > -1.0 && rho < 1.0)) throw DomainError("rho must lie in (-1,1)");
    if (!(sigma_fn(y0) > 0.0)) throw DomainError("spot volatility sigma(y0) must be positive");
}

void HestonSpec::validate() const {
    if (!(v0 > 0.0 && kappa > 0.0 && theta > 0.0 && xi_volvol > 0.0))
        throw DomainError("Heston v0, kappa, theta and vol-of-vol must be positive");
    if (!(rho > -1.0 && rho < 1.0)) throw DomainError("rho must lie in (-1,1)");
}

StochVolSpec constant_vol(double sigma) {
    if (!(sigma > 0.0)) throw DomainError("Brownian volatility must be positive");
    StochVolSpec sv;
    sv.mu_fn = [sigma](double) { return -0.5 * sigma * sigma; };
    sv.sigma_fn = [sigma](double) { return sigma; };
    sv.alpha_fn = [](double) { return 0.0; };
    sv.gamma_fn = [](double) { return 0.0; };
    sv.sigma_prime_fn = [](double) { return 0.0; };
    sv.rho = 0.0;
    sv.y0 = 0.0;
    return sv;
}

// The driver is the variance: sigma(v) = sqrt(v), gamma(v) = xi sqrt(v), so sigma' gamma = xi / 2.
StochVolSpec heston_stochvol(const HestonSpec& h) {
    h.validate();
    StochVolSpec sv;
    sv.mu_fn = [](double v) { return -0.5 * v; };
    sv.sigma_fn = [](double v) { return std::sqrt(std::max(v, 0.0)); };
    sv.alpha_fn = [h](double v) { return h.kappa * (h.theta - v); };
    sv.gamma_fn = [h](double v) { return h.xi_volvol * std::sqrt(std::max(v, 0.0)); };
    sv.sigma_prime_fn = [](double v) { return 0.5 / std::sqrt(v); };
    sv.rho = h.rho;
    sv.y0 = h.v0;
    return sv;
}

double leverage_contribution(const StochVolSpec& sv) {
    sv.validate();
    return sv.rho * sv.vol_of_vol_term() / (2.0 * sv.spot_vol());
}

}  // namespace tsskew
