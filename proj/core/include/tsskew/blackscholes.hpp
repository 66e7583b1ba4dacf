#pragma once

namespace tsskew {

enum class OptionKind { call, put };

struct Quote {
    double spot = 1.0;
    double strike = 1.0;
    double maturity = 1.0;
    double vol = 0.2;
    OptionKind kind = OptionKind::call;

    void validate() const;
};

struct PriceGreeks {
    double price = 0.0;
    double delta = 0.0;
    double vega = 0.0;
};

double norm_cdf(double x);
double norm_pdf(double x);

// Zero rates and dividends throughout.
PriceGreeks bs_price_greeks(const Quote& q);
double bs_price(double spot, double strike, double t, double vol, OptionKind kind);
double bs_vega(double spot, double strike, double t, double vol);
double bs_delta(double spot, double strike, double t, double vol, OptionKind kind);

// Bracketed Newton on sigma in [1e-6, 5], bisection when a step leaves the bracket.
double implied_vol(double price, double spot, double strike, double t, OptionKind kind);
double implied_vol_bisection(double price, double spot, double strike, double t, OptionKind kind);

// d sigma_hat / d kappa from the digital price P(S_t >= S_0 e^kappa) and the implied vol at kappa.
double skew_from_digital(double kappa, double t, double digital, double sigma_hat);

struct AtmIdentities {
    double skew_via_atm_slope = 0.0;
    double delta_via_delta = 0.0;
    bool large_total_vol = false;  // sigma_hat sqrt(t) above 0.5
};

AtmIdentities atm_identities(double sigma_hat, double digital_atm, double t, double price_atm, double spot = 1.0);

}  // namespace tsskew
