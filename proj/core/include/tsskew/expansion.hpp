#pragma once

#include "tsskew/bundle.hpp"
#include "tsskew/montecarlo.hpp"

namespace tsskew {

// Pure-jump expansion for ModelKind::ts, mixed expansion otherwise.
ExpansionBundle expansion_bundle(const McModel& m);
TermList expansion_terms(const McModel& m, Quantity q, int order = 2);
double eval_expansion(const McModel& m, Quantity q, double t, int order = 2);

}  // namespace tsskew
