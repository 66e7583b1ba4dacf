#pragma once

#include "tsskew/bundle.hpp"
#include "tsskew/models.hpp"

namespace tsskew {

struct MixedBundle {
    TemperedStableParams params;
    DerivedConstants consts;
    TermList d_terms;  // d_k t^{k(1-Y/2)}
    Term e_term;       // e t^{1/2}
    Term f_term;       // f t^{(3-Y)/2}
    double sigma_bar1 = 0.0;
    double c_skew = 0.0;
    double xi_const = 0.0;
    double spot_vol = 0.0;
    double rho = 0.0;
    double vol_of_vol_term = 0.0;  // sigma'(y0) gamma(y0)
    int n_order = 0;
};

// max{k >= 1 : k(1 - Y/2) <= (3 - Y)/2}
int mixed_order(double y);

// xi = int_0^inf phi_{sigma0}(x) x^{1-Y} dx
double xi_closed_form(double sigma0, double y);

MixedBundle build_mixed(const TemperedStableParams& p, const StochVolSpec& sv);

// order 1 keeps the digital terms up to t^{1/2}, order 2 keeps everything.
TermList mixed_terms(const MixedBundle& b, Quantity q, int order = 2);
double eval_mixed(const MixedBundle& b, Quantity q, double t, int order = 2);

ExpansionBundle to_expansion_bundle(const MixedBundle& b);

}  // namespace tsskew
