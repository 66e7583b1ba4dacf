#include "tsskew/blackscholes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tsskew/errors.hpp"

namespace tsskew {

constexpr double pi = std::numbers::pi;

void Quote::validate() const {
    if (!(spot > 0.0 && strike > 0.0 && maturity > 0.0 && vol > 0.0))
        throw DomainError("quote needs positive spot, strike, maturity and vol");
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi); }

double bs_price(double spot, double strike, double t, double vol, OptionKind kind) {
    const double v = vol * std::sqrt(t);
    const double d1 = (std::log(spot / strike) + 0.5 * v * v) / v;
    const double d2 = d1 - v;
    if (kind == OptionKind::call) return spot * norm_cdf(d1) - strike * norm_cdf(d2);
    return strike * norm_cdf(-d2) - spot * norm_cdf(-d1);
}

double bs_vega(double spot, double strike, double t, double vol) {
    const double v = vol * std::sqrt(t);
    const double d1 = (std::log(spot / strike) + 0.5 * v * v) / v;
    return spot * std::sqrt(t) * norm_pdf(d1);
}

double bs_delta(double spot, double strike, double t, double vol, OptionKind kind) {
    const double v = vol * std::sqrt(t);
    const double d1 = (std::log(spot / strike) + 0.5 * v * v) / v;
    return kind == OptionKind::call ? norm_cdf(d1) : norm_cdf(d1) - 1.0;
}

PriceGreeks bs_price_greeks(const Quote& q) {
    q.validate();
    return {bs_price(q.spot, q.strike, q.maturity, q.vol, q.kind),
            bs_delta(q.spot, q.strike, q.maturity, q.vol, q.kind), bs_vega(q.spot, q.strike, q.maturity, q.vol)};
}

namespace {

constexpr double vol_lo = 1e-6;
constexpr double vol_hi = 5.0;

// Out-of-the-money price: the time value is inverted, parity is exact with zero rates.
struct OtmTarget {
    double price;
    OptionKind kind;
};

OtmTarget to_otm(double price, double spot, double strike, OptionKind kind) {
    double intrinsic = kind == OptionKind::call ? std::max(spot - strike, 0.0) : std::max(strike - spot, 0.0);
    double upper = kind == OptionKind::call ? spot : strike;
    if (!(price > intrinsic) || !(price < upper)) throw OutOfBounds("option price outside no-arbitrage bounds");
    if (kind == OptionKind::call && strike < spot) return {price - (spot - strike), OptionKind::put};
    if (kind == OptionKind::put && strike > spot) return {price - (strike - spot), OptionKind::call};
    return {price, kind};
}

}  // namespace

double implied_vol(double price, double spot, double strike, double t, OptionKind kind) {
    if (!(spot > 0.0 && strike > 0.0 && t > 0.0)) throw DomainError("implied_vol needs positive spot, strike and t");
    const OtmTarget target = to_otm(price, spot, strike, kind);
    auto f = [&](double s) { return bs_price(spot, strike, t, s, target.kind) - target.price; };
    double lo = vol_lo, hi = vol_hi;
    if (f(lo) > 0.0 || f(hi) < 0.0) throw OutOfBounds("implied vol outside [1e-6, 5]");
    // Brenner-Subrahmanyam start, clipped into the bracket
    double s = std::sqrt(2.0 * pi / t) * target.price / spot;
    if (!(s > lo && s < hi)) s = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double diff = f(s);
        if (diff == 0.0) return s;
        if (diff > 0.0) hi = s; else lo = s;
        const double vega = bs_vega(spot, strike, t, s);
        double next = vega > 0.0 ? s - diff / vega : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - s) <= 1e-15 * s || hi - lo <= 4e-16 * s) return next;
        s = next;
    }
    return implied_vol_bisection(price, spot, strike, t, kind);
}

double implied_vol_bisection(double price, double spot, double strike, double t, OptionKind kind) {
    const OtmTarget target = to_otm(price, spot, strike, kind);
    double lo = vol_lo, hi = vol_hi;
    auto f = [&](double s) { return bs_price(spot, strike, t, s, target.kind) - target.price; };
    if (f(lo) > 0.0 || f(hi) < 0.0) throw OutOfBounds("implied vol outside [1e-6, 5]");
    for (int it = 0; it < 400 && hi - lo > 1e-16; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) hi = mid; else lo = mid;
    }
    return 0.5 * (lo + hi);
}

double skew_from_digital(double kappa, double t, double digital, double sigma_hat) {
    if (!(sigma_hat > 0.0 && t > 0.0)) throw DomainError("skew_from_digital needs positive sigma_hat and t");
    const double v = sigma_hat * std::sqrt(t);
    const double ek = std::exp(kappa);
    const double num = ek * digital - ek * norm_cdf(-(kappa + 0.5 * v * v) / v);
    const double den = std::sqrt(t) * norm_pdf((-kappa + 0.5 * v * v) / v);
    return -num / den;
}

AtmIdentities atm_identities(double sigma_hat, double digital_atm, double t, double price_atm, double spot) {
    if (!(t > 0.0)) throw DomainError("atm_identities needs t > 0");
    const double v = sigma_hat * std::sqrt(t);
    AtmIdentities r;
    r.skew_via_atm_slope =
        std::sqrt(2.0 * pi / t) * (0.5 - digital_atm - v / (2.0 * std::sqrt(2.0 * pi))) * (1.0 + v * v / 8.0);
    r.delta_via_delta = price_atm / spot + digital_atm;
    r.large_total_vol = v > 0.5;
    return r;
}

}  // namespace tsskew
