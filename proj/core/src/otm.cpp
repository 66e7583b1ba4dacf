#include "tsskew/otm.hpp"

#include <cmath>
#include <numbers>

#include "quad.hpp"

namespace tsskew {

void OtmInputs::validate() const {
    if (!std::isfinite(kappa) || kappa == 0.0) throw DomainError("kappa must be finite and nonzero");
    if (!(sigma_bm >= 0.0)) throw DomainError("sigma_bm must be nonnegative");
    levy.validate();
}

namespace {

struct Side {
    double c;
    double rate;
    double k;  // |kappa|
};

Side side_of(const TemperedStableParams& p, double kappa) {
    return kappa > 0.0 ? Side{p.c_plus, p.m_plus, kappa} : Side{p.c_minus, p.g_minus, -kappa};
}

// int_0^inf g(x) (k + x)^{-Y-1} dx, where g already carries the tempering factor.
template <class G>
double tail_integral(const Side& s, double y, G g) {
    return detail::integrate_half_line([&](double x) { return g(x) * std::pow(s.k + x, -y - 1.0); }, 1.0, 1e-12);
}

}  // namespace

double levy_tail_mass(const TemperedStableParams& p, double kappa) {
    p.validate();
    if (!std::isfinite(kappa) || kappa == 0.0) throw DomainError("kappa must be finite and nonzero");
    const Side s = side_of(p, kappa);
    if (s.c == 0.0) return 0.0;
    const double y = p.y_index;
    if (-s.rate * s.k - y * std::log(s.k) < std::log(1e-300))
        return s.c * std::exp(-s.rate * s.k) * std::pow(s.k, -y - 1.0) / s.rate;
    return s.c * std::exp(-s.rate * s.k) * tail_integral(s, y, [&](double x) { return std::exp(-s.rate * x); });
}

OtmConstants otm_constants(const OtmInputs& in) {
    in.validate();
    const TemperedStableParams& p = in.levy;
    const double y = p.y_index;
    const double k = in.kappa;
    const Side s = side_of(p, k);
    OtmConstants out;
    out.b0 = -std::exp(k) * levy_tail_mass(p, k);
    if (s.c == 0.0) return out;
    if (k > 0.0) {
        if (p.m_plus <= 1.0) throw DomainError("a0 needs M > 1 for kappa > 0");
        const double scale = s.c * std::exp(k * (1.0 - s.rate));
        if (scale == 0.0) return out;
        out.a0 = scale * tail_integral(s, y, [&](double x) {
            return std::exp((1.0 - s.rate) * x) - std::exp(-s.rate * x);
        });
    } else {
        const double scale = s.c * std::exp(k - s.rate * s.k);
        if (scale == 0.0) return out;
        out.a0 = scale * tail_integral(s, y, [&](double x) { return -std::expm1(-x) * std::exp(-s.rate * x); });
    }
    return out;
}

namespace {

double log_inv_t(double t) {
    if (!(t > 0.0 && t < std::exp(-1.0))) throw DomainError("t must lie in (0, 1/e)");
    return std::log(1.0 / t);
}

double v1_from(double a0, double kappa, double l) {
    if (!(a0 > 0.0)) throw DomainError("a0 vanishes for this kappa; the OTM expansion is undefined");
    return std::log(4.0 * std::sqrt(std::numbers::pi) * a0 * std::exp(-kappa / 2.0) / std::abs(kappa) *
                    std::pow(l, 1.5)) /
           l;
}

}  // namespace

double otm_v1(const OtmInputs& in, double t) {
    const double l = log_inv_t(t);
    return v1_from(otm_constants(in).a0, in.kappa, l);
}

double otm_implied_vol(const OtmInputs& in, double t) {
    const double l = log_inv_t(t);
    const double v1 = v1_from(otm_constants(in).a0, in.kappa, l);
    const double total = in.kappa * in.kappa * (1.0 + v1) / (2.0 * l);
    if (!(total > 0.0)) throw DomainError("OTM implied variance is not positive at this t");
    return std::sqrt(total / t);
}

double otm_skew(const OtmInputs& in, double t) {
    const double l = log_inv_t(t);
    const OtmConstants c = otm_constants(in);
    const double k = in.kappa;
    const double v1 = v1_from(c.a0, k, l);
    const double sgn = k > 0.0 ? 1.0 : -1.0;
    const double bracket = sgn * (1.0 + v1 / 2.0) - sgn * (1.0 + k / 2.0 - k * c.b0 / c.a0) / (2.0 * l);
    return bracket / std::sqrt(2.0 * t * l);
}

}  // namespace tsskew
