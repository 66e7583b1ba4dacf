#pragma once

#include <functional>
#include <string>

namespace tsskew {

// Tempered stable Levy measure
//   nu(dx) = C(x/|x|) |x|^{-Y-1} (exp(-M x) 1{x>0} + exp(-G |x|) 1{x<0}) dx.
struct TemperedStableParams {
    double c_plus = 0.0;
    double c_minus = 0.0;
    double g_minus = 1.0;
    double m_plus = 2.0;
    double y_index = 1.5;

    void validate() const;
    double alpha_plus() const { return -m_plus; }
    double alpha_minus() const { return g_minus; }
};

struct DerivedConstants {
    double gamma_tilde = 0.0;
    double eta = 0.0;
    double b_drift = 0.0;
};

struct MartingaleReport {
    bool pass = false;
    std::string reason;
    double b_drift = 0.0;
};

// Gamma(-Y) for Y in (1,2), through Gamma(2-Y)/((-Y)(1-Y)).
double gamma_neg(double y);

DerivedConstants derive_constants(const TemperedStableParams& p);
MartingaleReport validate_martingale(const TemperedStableParams& p);

// Quadrature versions of the defining integrals, used as cross-checks.
double gamma_tilde_quadrature(const TemperedStableParams& p);
double gamma_tilde_from_drift(const TemperedStableParams& p, double b_drift);
double eta_quadrature(const TemperedStableParams& p);
double b_drift_quadrature(const TemperedStableParams& p);

// Continuous component dV = mu(y)dt + sigma(y)(rho dW1 + sqrt(1-rho^2) dW2),
// driven by dY = alpha(y)dt + gamma(y) dW1.
struct StochVolSpec {
    std::function<double(double)> mu_fn;
    std::function<double(double)> sigma_fn;
    std::function<double(double)> alpha_fn;
    std::function<double(double)> gamma_fn;
    std::function<double(double)> sigma_prime_fn;
    double rho = 0.0;
    double y0 = 0.0;

    void validate() const;
    double spot_vol() const { return sigma_fn(y0); }
    double mu0() const { return mu_fn(y0); }
    double vol_of_vol_term() const { return sigma_prime_fn(y0) * gamma_fn(y0); }
};

struct HestonSpec {
    double v0 = 0.01;
    double kappa = 1.0;
    double theta = 0.01;
    double xi_volvol = 0.1;
    double rho = 0.0;

    void validate() const;
};

StochVolSpec constant_vol(double sigma);
StochVolSpec heston_stochvol(const HestonSpec& h);

// rho sigma'(y0) gamma(y0) / (2 sigma(y0))
double leverage_contribution(const StochVolSpec& sv);

}  // namespace tsskew
