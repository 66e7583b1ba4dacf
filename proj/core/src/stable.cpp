#include "tsskew/stable.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "chunked.hpp"
#include "fourier.hpp"
#include "quad.hpp"
#include "tsskew/errors.hpp"
#include "tsskew/montecarlo.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

namespace tsskew {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

StableLaw StableLaw::from_intensities(double c_plus, double c_minus, double y) {
    if (!(c_plus >= 0.0 && c_minus >= 0.0 && c_plus + c_minus > 0.0))
        throw DomainError("stable law needs nonnegative intensities with positive sum");
    if (!(y > 1.0 && y < 2.0)) throw DomainError("stable index must lie in (1,2)");
    StableLaw s;
    s.y_index = y;
    s.a_sum = c_plus + c_minus;
    s.b_diff = c_plus - c_minus;
    s.beta_skew = s.b_diff / s.a_sum;
    s.tau = std::tan(pi * y / 2.0);
    s.scale_c = -gamma_neg(y) * std::cos(pi * y / 2.0) * s.a_sum;
    const double at = std::atan(s.beta_skew * s.tau);
    s.delta_zol = 2.0 / pi * at;
    s.rho_pos = (s.delta_zol + y) / (2.0 * y);
    s.c0_zol = std::cos(at);
    return s;
}

StableLaw StableLaw::from_params(const TemperedStableParams& p) {
    p.validate();
    return from_intensities(p.c_plus, p.c_minus, p.y_index);
}

double positivity(const StableLaw& law) {
    return 0.5 + std::atan(law.beta_skew * law.tau) / (pi * law.y_index);
}

double expected_positive_part(const StableLaw& law) {
    const double y = law.y_index;
    const double bt = law.beta_skew * law.tau;
    return std::pow(law.a_sum, 1.0 / y) / pi * std::pow(gamma_neg(y), 1.0 / y) *
           std::pow(std::abs(std::cos(pi * y / 2.0)), 1.0 / y) * std::cos(std::atan(bt) / y) *
           std::tgamma(1.0 - 1.0 / y) * std::pow(1.0 + bt * bt, 1.0 / (2.0 * y));
}

double density_deriv_at_zero(const StableLaw& law, int k) {
    if (k < 1) throw DomainError("derivative order k must be at least 1");
    const double y = law.y_index;
    const double sign = (k - 1) % 2 == 0 ? 1.0 : -1.0;
    return sign * std::tgamma(k / y + 1.0) / (k * pi) * std::sin(law.rho_pos * k * pi) *
           std::pow(law.c0_zol / law.scale_c, k / y);
}

namespace {

// Fourier integrals in standardized units z = x / c^{1/Y}.
double v_max_for(double y, int order) { return std::pow(60.0 + 5.0 * order, 1.0 / y); }

cplx unit_cf(const StableLaw& law, double v) {
    return std::exp(-std::pow(v, law.y_index) * cplx(1.0, -law.beta_skew * law.tau));
}

}  // namespace

double density_deriv(const StableLaw& law, double x, int order) {
    if (order < 0) throw DomainError("derivative order must be nonnegative");
    const double s = std::pow(law.scale_c, 1.0 / law.y_index);
    const double z = x / s;
    const cplx mi_pow = std::pow(cplx(0.0, -1.0), order);
    auto g = [&](double v) {
        cplx w = mi_pow * std::pow(v, order) * std::exp(cplx(0.0, -v * z)) * unit_cf(law, v);
        return w.real();
    };
    double val = detail::oscillatory_integral(g, z, v_max_for(law.y_index, order)) / pi;
    return val / std::pow(s, order + 1);
}

double density(const StableLaw& law, double x) { return density_deriv(law, x, 0); }

double cdf(const StableLaw& law, double x) {
    const double s = std::pow(law.scale_c, 1.0 / law.y_index);
    const double z = x / s;
    auto g = [&](double v) {
        if (v == 0.0) return -z;
        return (std::exp(cplx(0.0, -v * z)) * unit_cf(law, v)).imag() / v;
    };
    return 0.5 - detail::oscillatory_integral(g, z, v_max_for(law.y_index, 0)) / pi;
}

double tail_constant(const StableLaw& law, int sign) { return sign > 0 ? law.c_plus() : law.c_minus(); }

namespace {

// A one-sided law; a zero intensity gives the point mass at zero.
StableLaw one_sided_law(double c, double y, int sign) {
    if (c > 0.0) return sign > 0 ? StableLaw::from_intensities(c, 0.0, y) : StableLaw::from_intensities(0.0, c, y);
    StableLaw s;
    s.y_index = y;
    s.beta_skew = sign > 0 ? 1.0 : -1.0;
    s.tau = std::tan(pi * y / 2.0);
    return s;
}

}  // namespace

OneSidedPair OneSidedPair::from_params(const TemperedStableParams& p) {
    p.validate();
    return {one_sided_law(p.c_plus, p.y_index, +1), one_sided_law(p.c_minus, p.y_index, -1)};
}

namespace {

// a = c (1 - i beta tan(pi Y/2)) for the two-sided sum.
cplx sum_exponent(const OneSidedPair& pair) {
    const StableLaw both = StableLaw::from_intensities(pair.law_p.c_plus(), pair.law_n.c_minus(), pair.law_p.y_index);
    return both.scale_c * cplx(1.0, -both.beta_skew * both.tau);
}

}  // namespace

OneSidedFunctionals one_sided_functionals_exact(const OneSidedPair& pair) {
    const double y = pair.law_p.y_index;
    const double tau = pair.law_p.tau;
    const double cp = pair.law_p.scale_c, cn = pair.law_n.scale_c;
    const cplx a = sum_exponent(pair);
    const cplx a_pow = std::pow(a, -(1.0 - 1.0 / y));
    const double g = std::tgamma(1.0 - 1.0 / y);
    OneSidedFunctionals r;
    r.p_indicator = cp / pi * g * (cplx(1.0, -tau) * a_pow).real();
    r.n_indicator = cn / pi * g * (cplx(1.0, tau) * a_pow).real();
    r.p_density = cp / pi * (cplx(tau, 1.0) / a).real();
    return r;
}

double n_density_functional_exact(const OneSidedPair& pair) {
    const double tau = pair.law_p.tau;
    const double cn = pair.law_n.scale_c;
    const cplx a = sum_exponent(pair);
    return cn / pi * (cplx(-tau, 1.0) / a).real();
}

OneSidedFunctionals one_sided_functionals(const OneSidedPair& pair, std::int64_t n_samples, std::uint64_t seed,
                                          std::int64_t chunk_size) {
    if (n_samples < 10000) throw DomainError("one_sided_functionals needs at least 1e4 samples");
    if (!(pair.law_p.scale_c > 0.0 && pair.law_n.scale_c > 0.0))
        throw DomainError("Monte Carlo functionals need both intensities positive");
    const double y = pair.law_p.y_index;
    const double cp = pair.law_p.scale_c / (-std::cos(pi * y / 2.0) * gamma_neg(y));
    const double cn = pair.law_n.scale_c / (-std::cos(pi * y / 2.0) * gamma_neg(y));

    // Tabulate the density of Zn; beyond the table use the power tail on the left
    // and zero on the right, where the spectrally negative law decays faster than any power.
    const double s_n = std::pow(pair.law_n.scale_c, 1.0 / y);
    const double lo = -60.0 * s_n, hi = 8.0 * s_n;
    const std::size_t n_nodes = 4097;
    const double step = (hi - lo) / static_cast<double>(n_nodes - 1);
    std::vector<double> nodes(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) nodes[i] = density(pair.law_n, lo + step * static_cast<double>(i));
    boost::math::interpolators::cardinal_cubic_b_spline<double> fn(nodes.begin(), nodes.end(), lo, step);
    auto f_n = [&](double x) {
        if (x < lo) return cn * std::pow(-x, -y - 1.0);
        if (x > hi) return 0.0;
        return std::max(0.0, fn(x));
    };

    auto sums = detail::run_chunks(n_samples, chunk_size, seed, 0, 6,
                                   [&](std::mt19937_64& rng, std::int64_t n, std::vector<detail::KahanSum>& acc) {
                                       for (std::int64_t i = 0; i < n; ++i) {
                                           double zp = sample_one_sided_stable(y, 1.0, cp, +1, rng);
                                           double zn = sample_one_sided_stable(y, 1.0, cn, -1, rng);
                                           bool pos = zp + zn >= 0.0;
                                           double a = pos ? zp : 0.0;
                                           double b = pos ? zn : 0.0;
                                           double c = zp * f_n(-zp);
                                           acc[0].add(a);
                                           acc[1].add(a * a);
                                           acc[2].add(b);
                                           acc[3].add(b * b);
                                           acc[4].add(c);
                                           acc[5].add(c * c);
                                       }
                                   });
    const double n = static_cast<double>(n_samples);
    auto se = [n](double s1, double s2) {
        double m = s1 / n;
        return std::sqrt(std::max(0.0, s2 / n - m * m) / n);
    };
    OneSidedFunctionals r;
    r.p_indicator = sums[0] / n;
    r.p_indicator_se = se(sums[0], sums[1]);
    r.n_indicator = sums[2] / n;
    r.n_indicator_se = se(sums[2], sums[3]);
    r.p_density = sums[4] / n;
    r.p_density_se = se(sums[4], sums[5]);
    return r;
}

double generator_power_psi_at_zero(const StableLaw& law, int k) {
    if (k < 1) throw DomainError("generator power must be at least 1");
    const double y = law.y_index;
    const cplx w = std::pow(cplx(1.0, -law.beta_skew * law.tau), k);
    return std::pow(-law.scale_c, k) * w.imag() * std::pow(2.0, k * y / 2.0 - 1.0) * std::tgamma(k * y / 2.0) / pi;
}

std::vector<double> generator_psi_coeffs(const TemperedStableParams& p, double sigma0, int k_max) {
    p.validate();
    if (!(sigma0 > 0.0)) throw DomainError("spot volatility must be positive");
    if (k_max < 1) throw DomainError("k_max must be at least 1");
    const StableLaw law = StableLaw::from_params(p);
    std::vector<double> out;
    double fact = 1.0;
    for (int k = 1; k <= k_max; ++k) {
        fact *= k;
        out.push_back(std::pow(sigma0, -k * p.y_index) * generator_power_psi_at_zero(law, k) / fact);
    }
    return out;
}

double generator_apply(const StableLaw& law, const std::function<double(double)>& g,
                       const std::function<double(double)>& dg, double x) {
    const double y = law.y_index;
    const double cp = law.c_plus(), cm = law.c_minus();
    // Below delta the integrand is replaced by its second-order Taylor term.
    const double delta = 1e-4;
    const double h = 1e-3;
    const double d2 = (dg(x + h) - dg(x - h)) / (2.0 * h);
    double near = (cp + cm) * d2 / 2.0 * std::pow(delta, 2.0 - y) / (2.0 - y);
    const double gx = g(x), dgx = dg(x);
    auto right = [&](double u) { return (g(x + u) - gx - u * dgx) * std::pow(u, -y - 1.0); };
    auto left = [&](double u) { return (g(x - u) - gx + u * dgx) * std::pow(u, -y - 1.0); };
    auto piece = [&](const auto& f) {
        double v = detail::integrate_finite(f, delta, 1.0, 1e-12);
        boost::math::quadrature::exp_sinh<double> es;
        double err = 0.0;
        v += es.integrate([&](double u) { return f(u + 1.0); }, 1e-12, &err);
        return v;
    };
    double out = near;
    if (cp > 0.0) out += cp * piece(right);
    if (cm > 0.0) out += cm * piece(left);
    return out;
}

namespace {

double std_phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi); }

}  // namespace

double d1_integral_form(const TemperedStableParams& p, double sigma0) {
    p.validate();
    const double y = p.y_index;
    const double r = 40.0;
    double head = detail::integrate_finite([&](double x) { return (std_phi(x) - std_phi(0.0)) * std::pow(x, -y); },
                                           0.0, r);
    double tail = -std_phi(0.0) * std::pow(r, 1.0 - y) / (y - 1.0);
    return (p.c_plus - p.c_minus) / (std::pow(sigma0, y) * y) * (head + tail);
}

double d2_double_integral(const TemperedStableParams& p, double sigma0) {
    p.validate();
    const double y = p.y_index;
    const double r = 40.0;
    // J = int_0^inf v^{1-Y} phi(v) dv
    const double j = std::pow(2.0, -(y + 1.0) / 2.0) * std::tgamma(1.0 - y / 2.0) / std::sqrt(pi);
    auto inner = [&](double x) {
        if (x == 0.0) return 0.0;
        const double xphi = x * std_phi(x);
        auto f = [&](double v) { return ((x + v) * std_phi(x + v) - xphi - v * std_phi(v)) * std::pow(v, -y); };
        double head = detail::integrate_finite(f, 0.0, r, 1e-11);
        return head - xphi * std::pow(r, 1.0 - y) / (y - 1.0);
    };
    double head = detail::integrate_finite([&](double x) { return inner(x) * std::pow(x, -y); }, 0.0, r, 1e-9);
    double tail = -j * std::pow(r, 1.0 - y) / (y - 1.0);
    const double cc = p.c_plus * p.c_plus - p.c_minus * p.c_minus;
    return -0.5 * cc / (std::pow(sigma0, 2.0 * y) * y * y) * (head + tail);
}

}  // namespace tsskew
