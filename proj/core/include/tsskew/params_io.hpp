#pragma once

#include <string>

#include "tsskew/montecarlo.hpp"

namespace tsskew {

// {"model": "ts" | "ts+bm" | "ts+heston", "C_plus", "C_minus", "G", "M", "Y",
//  "sigma" (ts+bm), "heston": {"v0", "kappa", "theta", "xi", "rho"} (ts+heston)}
McModel model_from_json(const std::string& text);
McModel load_model(const std::string& path);
std::string model_to_json(const McModel& m, int indent = 2);

// Continuous component of a ts+bm or ts+heston model; DomainError for pure jumps.
StochVolSpec stochvol_of(const McModel& m);

}  // namespace tsskew
