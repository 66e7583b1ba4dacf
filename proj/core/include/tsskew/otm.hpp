#pragma once

#include "tsskew/models.hpp"

namespace tsskew {

struct OtmInputs {
    double kappa = 0.1;
    TemperedStableParams levy;
    double sigma_bm = 0.0;

    void validate() const;
};

struct OtmConstants {
    double a0 = 0.0;
    double b0 = 0.0;
};

// nu([k, inf)) for k > 0 and nu((-inf, k]) for k < 0.
double levy_tail_mass(const TemperedStableParams& p, double kappa);

OtmConstants otm_constants(const OtmInputs& in);

double otm_v1(const OtmInputs& in, double t);
// Leading-order OTM implied volatility, sigma_hat^2 t = kappa^2 (1 + V1) / (2 ln(1/t)).
double otm_implied_vol(const OtmInputs& in, double t);
double otm_skew(const OtmInputs& in, double t);

}  // namespace tsskew
