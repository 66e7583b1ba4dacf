#pragma once

#include <string>
#include <vector>

#include "tsskew/blackscholes.hpp"
#include "tsskew/montecarlo.hpp"

namespace tsskew {

// One row of the chain CSV: quote_date,expiry_date,type,strike,bid,ask,vix
struct ChainRow {
    std::string quote_date;
    std::string expiry_date;
    OptionKind kind = OptionKind::call;
    double strike = 0.0;
    double bid = 0.0;
    double ask = 0.0;
    double vix = 0.0;
};

struct ChainQuote {
    double strike = 0.0;
    OptionKind kind = OptionKind::call;
    double bid = 0.0;
    double ask = 0.0;

    double mid() const { return 0.5 * (bid + ask); }
};

struct ExpiryChain {
    std::string expiry_date;
    double t = 0.0;  // ACT/365
    std::vector<ChainQuote> quotes;
};

struct ChainSnapshot {
    std::string quote_date;
    double vix = 0.0;
    std::vector<ExpiryChain> expiries;  // sorted by maturity
    std::vector<std::string> rejected;  // row-level diagnostics
};

constexpr double min_maturity_days = 5.0;

// Days from one ISO-8601 date to another; ParseError-free, throws DomainError on a malformed date.
double days_between(const std::string& from, const std::string& to);

// All snapshots in a CSV file, one per quote date.
std::vector<ChainSnapshot> load_chains(const std::string& path);
std::vector<ChainSnapshot> parse_chains(const std::string& csv_text);
// The single snapshot of a one-date file.
ChainSnapshot load_chain(const std::string& path);

// F = K* + C(K*) - P(K*) at the strike minimizing |C - P|; ties go to the lower strike.
double implied_forward(const ExpiryChain& chain);

struct MarketSmilePoint {
    double strike = 0.0;
    double kappa = 0.0;  // ln(K/F)
    double iv = 0.0;
    OptionKind kind = OptionKind::call;
};

struct MarketSmile {
    double forward = 0.0;
    double t = 0.0;
    std::vector<MarketSmilePoint> points;  // sorted by strike
    std::vector<std::string> warnings;
};

// Puts for K <= F, calls for K > F, inverted with spot = F.
MarketSmile build_otm_smile(const ExpiryChain& chain, double forward);

enum class DeltaMode { interpolate, nearest };

std::string to_string(DeltaMode m);
DeltaMode delta_mode_from_string(const std::string& s);

struct WingSkew {
    double kappa_put = 0.0;
    double kappa_call = 0.0;
    double iv_put = 0.0;
    double iv_call = 0.0;
    double skew = 0.0;
};

// Slope between the 25-delta put and 25-delta call; MissingWing if either cannot be located.
WingSkew skew_25delta(const MarketSmile& smile, DeltaMode mode = DeltaMode::interpolate);

struct SkewPoint {
    std::string quote_date;
    std::string expiry_date;
    double t = 0.0;
    double skew = 0.0;
    double skew_norm = 0.0;  // skew / (VIX / 100)
};

struct SkewSeries {
    std::string quote_date;
    DeltaMode mode = DeltaMode::interpolate;
    std::vector<SkewPoint> points;
    std::vector<std::string> warnings;
};

// Expiries shorter than five days are dropped; expiries without both wings are skipped with a warning.
SkewSeries skew_series(const ChainSnapshot& snap, DeltaMode mode = DeltaMode::interpolate);

struct PowerLawFit {
    double slope_b = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int n_points = 0;
    double window = 0.0;
};

// OLS of ln|skew_norm| on ln t over points with t <= t_max.
PowerLawFit fit_powerlaw(const std::vector<SkewPoint>& points, double t_max);

enum class CalibrationModel { purejump, mixed };

struct Calibration {
    double b = 0.0;
    double y_purejump = 0.0;  // b = 1/2 - 1/Y
    double y_mixed = 0.0;     // b = (1 - Y)/2
    bool admissible = false;  // b in (-1/2, 0)
    std::vector<std::string> regime_flags;
    CalibrationModel model = CalibrationModel::mixed;
    double y() const { return model == CalibrationModel::mixed ? y_mixed : y_purejump; }
};

Calibration calibrate_Y(const PowerLawFit& fit, CalibrationModel model = CalibrationModel::mixed);
Calibration calibrate_Y_from_slope(double b, CalibrationModel model = CalibrationModel::mixed);
CalibrationModel calibration_model_from_string(const std::string& s);
std::string to_string(CalibrationModel m);

// CSV with the exact chain header.
std::string chain_to_csv(const std::vector<ChainRow>& rows);
void write_chain_csv(const std::string& path, const std::vector<ChainRow>& rows);

// ISO date `days` after `date`.
std::string add_days(const std::string& date, int days);

struct SyntheticChainSpec {
    std::string quote_date = "2020-01-02";
    std::vector<int> expiry_days;
    double spot = 100.0;
    double vix = 20.0;
    double half_width = 4.0;   // strikes over +-half_width * spot_vol * sqrt(t) in log-moneyness
    double log_step = 0.001;
};

// Chain rows from Monte Carlo prices (bid = ask = model price), one path set per expiry with a common seed.
std::vector<ChainRow> synthetic_chain(const McModel& model, const SyntheticChainSpec& spec, const McConfig& cfg);
// Chain rows from Black-Scholes prices at a flat volatility.
std::vector<ChainRow> black_scholes_chain(double forward, double vol, const SyntheticChainSpec& spec);

}  // namespace tsskew
