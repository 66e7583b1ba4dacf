#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tsskew/models.hpp"

namespace tsskew {

enum class ModelKind { ts, ts_bm, ts_heston };

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

// X (tempered stable) plus an optional independent continuous component V.
struct McModel {
    ModelKind kind = ModelKind::ts;
    TemperedStableParams params;
    double sigma = 0.0;
    HestonSpec heston;

    void validate() const;
    double spot_vol() const;
};

struct McConfig {
    std::int64_t n_paths = 1'000'000;
    std::uint64_t seed = 7;
    std::int64_t chunk_size = 1 << 15;
    int n_steps = 200;
    int n_threads = 0;  // 0 picks hardware concurrency
    // For ts_bm, integrate the Brownian part analytically given the jump draw.
    bool conditional_bs = false;

    void validate() const;
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t n_paths = 0;
};

// Counter-based stream for one chunk: a pure function of (seed, chunk index).
std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t chunk_index);

// Strictly Y-stable variate at horizon t with one-sided Levy density c_side |x|^{-Y-1}
// on the positive (sign = +1) or negative (sign = -1) half line. Chambers-Mallows-Stuck.
double sample_one_sided_stable(double y, double t, double c_side, int sign, std::mt19937_64& rng);

McEstimate digital_price_mc(const McModel& model, double t, const McConfig& cfg, double kappa = 0.0);

struct SmilePoint {
    double kappa = 0.0;
    double price = 0.0;
    double price_se = 0.0;
    double iv = 0.0;
    double iv_se = 0.0;
    bool ok = false;
};

// Call prices at strikes exp(kappa) (spot 1) and their implied volatilities.
std::vector<SmilePoint> smile_mc(const McModel& model, double t, const std::vector<double>& kappas,
                                 const McConfig& cfg);

McEstimate skew_fd_mc(const McModel& model, double t, const McConfig& cfg, double dk = 0.01);

struct SimulatedChain {
    double forward = 1.0;
    double forward_se = 0.0;
    std::vector<double> log_strikes;
    std::vector<double> calls;
    std::vector<double> puts;
};

// Call and put prices on one path set (spot 1). Parity holds exactly against the simulated forward.
SimulatedChain simulate_chain(const McModel& model, double t, const std::vector<double>& log_strikes,
                              const McConfig& cfg);

}  // namespace tsskew
