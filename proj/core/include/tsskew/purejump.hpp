#pragma once

#include "tsskew/bundle.hpp"
#include "tsskew/models.hpp"
#include "tsskew/stable.hpp"

namespace tsskew {

struct PureJumpBundle {
    TemperedStableParams params;
    DerivedConstants consts;
    double p0 = 0.5;
    TermList d_terms;  // d_k t^{k(1-1/Y)}
    Term e_term;       // e t^{1/Y}
    Term f_term;       // f t
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    int n_order = 0;
    OneSidedFunctionals functionals;
};

// max{k >= 1 : k(1 - 1/Y) <= 1}
int purejump_order(double y);

PureJumpBundle build_purejump(const TemperedStableParams& p);

// order 1 keeps the terms up to t^{1/Y} in the digital price, order 2 keeps everything.
TermList purejump_terms(const PureJumpBundle& b, Quantity q, int order = 2);
double eval_purejump(const PureJumpBundle& b, Quantity q, double t, int order = 2);

ExpansionBundle to_expansion_bundle(const PureJumpBundle& b);

}  // namespace tsskew
