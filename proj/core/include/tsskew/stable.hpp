#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tsskew/models.hpp"

namespace tsskew {

// Strictly Y-stable law with Levy density C(x/|x|) |x|^{-Y-1}.
// Characteristic function for u > 0: exp(-c u^Y (1 - i beta tan(pi Y / 2))).
struct StableLaw {
    double y_index = 1.5;
    double a_sum = 0.0;
    double b_diff = 0.0;
    double beta_skew = 0.0;
    double scale_c = 0.0;
    double tau = 0.0;  // tan(pi Y / 2)
    double rho_pos = 0.5;
    double delta_zol = 0.0;
    double c0_zol = 1.0;

    static StableLaw from_intensities(double c_plus, double c_minus, double y);
    static StableLaw from_params(const TemperedStableParams& p);

    double c_plus() const { return 0.5 * (a_sum + b_diff); }
    double c_minus() const { return 0.5 * (a_sum - b_diff); }
};

double positivity(const StableLaw& law);
double expected_positive_part(const StableLaw& law);
double density_deriv_at_zero(const StableLaw& law, int k);

// Density and its derivatives by Fourier inversion.
double density(const StableLaw& law, double x);
double density_deriv(const StableLaw& law, double x, int order);
double cdf(const StableLaw& law, double x);

// Tail constant of the density: |x|^{Y+1} f(x) -> C(sign x).
double tail_constant(const StableLaw& law, int sign);

struct OneSidedPair {
    StableLaw law_p;
    StableLaw law_n;
    static OneSidedPair from_params(const TemperedStableParams& p);
};

struct OneSidedFunctionals {
    double p_indicator = 0.0;  // E(Zp 1{Zp + Zn >= 0})
    double n_indicator = 0.0;  // E(Zn 1{Zp + Zn >= 0})
    double p_density = 0.0;    // E(Zp f_{Zn}(-Zp))
    double p_indicator_se = 0.0;
    double n_indicator_se = 0.0;
    double p_density_se = 0.0;
};

// Exact values obtained from the characteristic functions.
OneSidedFunctionals one_sided_functionals_exact(const OneSidedPair& pair);
// E(Zn f_{Zp}(-Zn)) in closed form.
double n_density_functional_exact(const OneSidedPair& pair);

// Monte Carlo estimates with standard errors, deterministic in (seed, n_samples, chunk_size).
OneSidedFunctionals one_sided_functionals(const OneSidedPair& pair, std::int64_t n_samples, std::uint64_t seed,
                                          std::int64_t chunk_size = 1 << 16);

// L_Z^k Psi(0) / k! scaled by sigma0^{-kY}, k = 1..k_max, with Psi(z) = Phi(z) - 1/2.
std::vector<double> generator_psi_coeffs(const TemperedStableParams& p, double sigma0, int k_max);
// Unscaled L_Z^k Psi(0) for the unit-variance Gaussian.
double generator_power_psi_at_zero(const StableLaw& law, int k);

// (L_Z g)(x) by direct quadrature over the Levy measure.
double generator_apply(const StableLaw& law, const std::function<double(double)>& g,
                       const std::function<double(double)>& dg, double x);

// First coefficient from its integral representation, sigma0^{-Y}(C(1)-C(-1))/Y int (phi(x)-phi(0)) x^{-Y} dx.
double d1_integral_form(const TemperedStableParams& p, double sigma0);
// Second coefficient from its double-integral representation.
double d2_double_integral(const TemperedStableParams& p, double sigma0);

}  // namespace tsskew
