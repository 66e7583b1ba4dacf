#include <CLI11.hpp>
#include <json.hpp>

#include <boost/version.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tsskew/errors.hpp"
#include "tsskew/expansion.hpp"
#include "tsskew/market.hpp"
#include "tsskew/montecarlo.hpp"
#include "tsskew/otm.hpp"
#include "tsskew/params_io.hpp"
#include "tsskew/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace tsskew;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string out_dir = "out";
    std::string params;
    std::string model_override;
    std::string quantity = "digital";
    std::string t_grid;
    std::string kappa_grid;
    std::vector<double> t_values;
    int order = 2;
    double dk = 0.01;
    double paths = 1e6;  // accepts 1e6 as well as 1000000
    std::uint64_t seed = 7;
    int threads = 0;
    int steps = 200;
    std::int64_t chunk = 1 << 15;
    bool conditional_bs = false;
    // calibrate
    std::string chains;
    double t_max = 0.25;
    std::string calib_model = "mixed";
    std::string delta_mode = "interpolate";
    // synth-chain
    std::vector<int> days = {7, 14, 21, 28, 42, 56, 70, 91};
    std::string quote_date = "2020-01-02";
    double spot = 100.0;
    double vix = 20.0;
    double half_width = 4.0;
    double log_step = 0.001;
    std::string chain_file = "chain.csv";
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// "a:b:n" or a comma list.
std::vector<double> parse_grid(const std::string& spec, bool log_spaced) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        double a = 0.0, b = 0.0;
        int n = 0;
        char tail = 0;
        if (std::sscanf(spec.c_str(), "%lf:%lf:%d%c", &a, &b, &n, &tail) != 3 || n < 1)
            throw UsageError("grid '" + spec + "' is not of the form a:b:n");
        if (log_spaced && !(a > 0.0 && b > 0.0)) throw UsageError("log-spaced grid needs positive endpoints");
        for (int i = 0; i < n; ++i) {
            const double w = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
            out.push_back(log_spaced ? a * std::pow(b / a, w) : a + w * (b - a));
        }
        return out;
    }
    std::stringstream ss(spec);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            out.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw UsageError("cannot parse grid value '" + cell + "'");
        }
    }
    if (out.empty()) throw UsageError("empty grid");
    return out;
}

std::vector<double> t_list(const Options& o) {
    if (!o.t_values.empty() && !o.t_grid.empty()) throw UsageError("give either --t or --t-grid, not both");
    if (!o.t_values.empty()) return o.t_values;
    if (!o.t_grid.empty()) return parse_grid(o.t_grid, true);
    throw UsageError("a maturity is required (--t or --t-grid)");
}

McModel load_params(const Options& o) {
    if (o.params.empty()) throw UsageError("--params is required");
    McModel m = load_model(o.params);
    if (!o.model_override.empty()) {
        m.kind = model_kind_from_string(o.model_override);
        m.validate();
    }
    return m;
}

McConfig mc_config(const Options& o) {
    McConfig c;
    if (o.paths != std::floor(o.paths) || o.paths > 1e15) throw UsageError("--paths must be a whole number");
    c.n_paths = static_cast<std::int64_t>(o.paths);
    c.seed = o.seed;
    c.n_threads = o.threads;
    c.n_steps = o.steps;
    c.chunk_size = o.chunk;
    c.conditional_bs = o.conditional_bs;
    c.validate();
    return c;
}

class Run {
public:
    Run(std::string sub, const Options& o) : sub_(std::move(sub)), dir_(o.out_dir) {
        fs::create_directories(dir_);
        config_ = json::object();
    }

    json& config() { return config_; }

    void write(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw DataError("cannot write " + p.string());
        out << text;
        outputs_.push_back(p.string());
    }

    void finish(std::uint64_t seed, bool uses_seed) {
        json m;
        m["subcommand"] = sub_;
        m["config"] = config_;
        m["seed"] = uses_seed ? json(seed) : json(nullptr);
        m["versions"] = {{"tsskew", version}, {"boost", BOOST_LIB_VERSION}, {"compiler", __VERSION__}};
        m["outputs"] = outputs_;
        std::ofstream out(dir_ / "manifest.json", std::ios::binary);
        if (!out) throw DataError("cannot write manifest");
        out << m.dump(2) << "\n";
    }

private:
    std::string sub_;
    fs::path dir_;
    json config_;
    std::vector<std::string> outputs_;
};

void record_model(Run& run, const McModel& m, const Options& o) {
    run.config()["params_file"] = o.params;
    run.config()["model"] = json::parse(model_to_json(m));
}

void record_mc(Run& run, const McConfig& c) {
    run.config()["paths"] = c.n_paths;
    run.config()["chunk"] = c.chunk_size;
    run.config()["steps"] = c.n_steps;
    run.config()["conditional_bs"] = c.conditional_bs;
}

McEstimate mc_quantity(const McModel& m, Quantity q, double t, const McConfig& c, double dk) {
    switch (q) {
        case Quantity::digital: return digital_price_mc(m, t, c);
        case Quantity::skew: return skew_fd_mc(m, t, c, dk);
        case Quantity::atm_vol: {
            const SmilePoint p = smile_mc(m, t, {0.0}, c).front();
            if (!p.ok) throw NoConvergence("ATM implied volatility could not be inverted");
            return {p.iv, p.iv_se, c.n_paths};
        }
        case Quantity::delta: {
            const SmilePoint p = smile_mc(m, t, {0.0}, c).front();
            const McEstimate d = digital_price_mc(m, t, c);
            return {p.price + d.value, std::hypot(p.price_se, d.std_error), c.n_paths};
        }
    }
    throw DomainError("unknown quantity");
}

int cmd_coeffs(const Options& o) {
    Run run("coeffs", o);
    const McModel m = load_params(o);
    record_model(run, m, o);
    const std::string text = bundle_to_json(expansion_bundle(m)) + "\n";
    run.write("coeffs.json", text);
    std::cout << text;
    run.finish(o.seed, false);
    return 0;
}

int cmd_eval(const Options& o) {
    Run run("eval", o);
    const McModel m = load_params(o);
    const Quantity q = quantity_from_string(o.quantity);
    const auto ts = t_list(o);
    record_model(run, m, o);
    run.config()["quantity"] = o.quantity;
    run.config()["order"] = o.order;
    run.config()["t"] = ts;
    const TermList terms = expansion_terms(m, q, o.order);
    std::string csv = "t,value\n";
    for (double t : ts) csv += fmt(t) + "," + fmt(eval_terms(terms, t)) + "\n";
    run.write("eval.csv", csv);
    std::cout << csv;
    run.finish(o.seed, false);
    return 0;
}

int cmd_mc(const Options& o) {
    Run run("mc", o);
    const McModel m = load_params(o);
    const Quantity q = quantity_from_string(o.quantity);
    const McConfig c = mc_config(o);
    const auto ts = t_list(o);
    record_model(run, m, o);
    record_mc(run, c);
    run.config()["quantity"] = o.quantity;
    run.config()["t"] = ts;
    if (q == Quantity::skew) run.config()["dk"] = o.dk;
    std::string csv = "t,value,std_error,paths\n";
    for (double t : ts) {
        const McEstimate e = mc_quantity(m, q, t, c, o.dk);
        csv += fmt(t) + "," + fmt(e.value) + "," + fmt(e.std_error) + "," + std::to_string(e.n_paths) + "\n";
    }
    run.write("mc.csv", csv);
    std::cout << csv;
    run.finish(c.seed, true);
    return 0;
}

int cmd_compare(const Options& o) {
    Run run("compare", o);
    const McModel m = load_params(o);
    const Quantity q = quantity_from_string(o.quantity);
    const McConfig c = mc_config(o);
    const auto ts = t_list(o);
    record_model(run, m, o);
    record_mc(run, c);
    run.config()["quantity"] = o.quantity;
    run.config()["t"] = ts;
    const TermList first = expansion_terms(m, q, 1);
    const TermList second = expansion_terms(m, q, 2);
    std::string csv = "t,approx1,approx2,mc,mc_stderr\n";
    for (double t : ts) {
        const McEstimate e = mc_quantity(m, q, t, c, o.dk);
        csv += fmt(t) + "," + fmt(eval_terms(first, t)) + "," + fmt(eval_terms(second, t)) + "," + fmt(e.value) +
               "," + fmt(e.std_error) + "\n";
    }
    run.write("compare.csv", csv);
    json axes = {{"x", {{"column", "t"}, {"scale", "log10"}}},
                 {"y", {{"columns", {"approx1", "approx2", "mc"}}, {"quantity", o.quantity}, {"scale", "log10"}}}};
    run.write("axes.json", axes.dump(2) + "\n");
    std::cout << csv;
    run.finish(c.seed, true);
    return 0;
}

int cmd_smile(const Options& o) {
    Run run("smile", o);
    const McModel m = load_params(o);
    const McConfig c = mc_config(o);
    if (o.t_values.size() != 1) throw UsageError("smile needs exactly one --t");
    const double t = o.t_values.front();
    const auto ks = parse_grid(o.kappa_grid.empty() ? "-0.1:0.1:21" : o.kappa_grid, false);
    record_model(run, m, o);
    record_mc(run, c);
    run.config()["t"] = t;
    run.config()["kappa"] = ks;
    std::vector<double> all = ks;
    all.push_back(0.0);
    const auto pts = smile_mc(m, t, all, c);
    const SmilePoint atm = pts.back();
    const double slope = eval_expansion(m, Quantity::skew, t, 2);
    std::string csv = "kappa,iv,iv_se,ok,tangent\n";
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const SmilePoint& p = pts[i];
        const std::string tangent = atm.ok ? fmt(atm.iv + slope * p.kappa) : "nan";
        csv += fmt(p.kappa) + "," + (p.ok ? fmt(p.iv) : "nan") + "," + (p.ok ? fmt(p.iv_se) : "nan") + "," +
               (p.ok ? "1" : "0") + "," + tangent + "\n";
    }
    run.write("smile.csv", csv);
    json tangent = {{"t", t}, {"atm_iv_mc", atm.ok ? json(atm.iv) : json(nullptr)}, {"skew_expansion", slope}};
    run.write("tangent.json", tangent.dump(2) + "\n");
    std::cout << csv;
    run.finish(c.seed, true);
    return 0;
}

int cmd_otm(const Options& o) {
    Run run("otm", o);
    const McModel m = load_params(o);
    const auto ts = t_list(o);
    if (o.kappa_grid.empty()) throw UsageError("otm needs --kappa");
    const auto ks = parse_grid(o.kappa_grid, false);
    record_model(run, m, o);
    run.config()["t"] = ts;
    run.config()["kappa"] = ks;
    std::string csv = "kappa,t,skew_approx\n";
    for (double k : ks) {
        OtmInputs in;
        in.kappa = k;
        in.levy = m.params;
        in.sigma_bm = m.spot_vol();
        for (double t : ts) csv += fmt(k) + "," + fmt(t) + "," + fmt(otm_skew(in, t)) + "\n";
    }
    run.write("otm.csv", csv);
    std::cout << csv;
    run.finish(o.seed, false);
    return 0;
}

std::vector<std::string> chain_files(const std::string& path) {
    std::vector<std::string> files;
    if (fs::is_directory(path)) {
        for (const auto& e : fs::directory_iterator(path))
            if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path().string());
        std::sort(files.begin(), files.end());
    } else if (fs::is_regular_file(path)) {
        files.push_back(path);
    }
    if (files.empty()) throw DataError("no chain CSV files found at " + path);
    return files;
}

int cmd_calibrate(const Options& o) {
    Run run("calibrate", o);
    if (o.chains.empty()) throw UsageError("--chains is required");
    const CalibrationModel cm = calibration_model_from_string(o.calib_model);
    const DeltaMode dm = delta_mode_from_string(o.delta_mode);
    run.config()["chains"] = o.chains;
    run.config()["t_max"] = o.t_max;
    run.config()["model"] = o.calib_model;
    run.config()["delta_mode"] = o.delta_mode;

    std::string csv = "quote_date,t,skew_norm\n";
    json fits = json::array(), skipped = json::array(), warnings = json::array();
    double slope_sum = 0.0, r2_sum = 0.0;
    for (const auto& file : chain_files(o.chains)) {
        for (const ChainSnapshot& snap : load_chains(file)) {
            for (const auto& r : snap.rejected) warnings.push_back(file + ": " + r);
            const SkewSeries s = skew_series(snap, dm);
            for (const auto& w : s.warnings) warnings.push_back(snap.quote_date + ": " + w);
            for (const SkewPoint& p : s.points) csv += p.quote_date + "," + fmt(p.t) + "," + fmt(p.skew_norm) + "\n";
            try {
                const PowerLawFit f = fit_powerlaw(s.points, o.t_max);
                fits.push_back({{"quote_date", snap.quote_date},
                                {"slope", f.slope_b},
                                {"intercept", f.intercept},
                                {"r2", f.r_squared},
                                {"n", f.n_points},
                                {"window", f.window}});
                slope_sum += f.slope_b;
                r2_sum += f.r_squared;
            } catch (const DataError& e) {
                skipped.push_back({{"quote_date", snap.quote_date}, {"reason", e.what()}});
            }
        }
    }
    run.write("skew_series.csv", csv);
    if (fits.empty()) throw InsufficientQuotes("no quote date produced a power-law fit");
    const double n = static_cast<double>(fits.size());
    const Calibration cal = calibrate_Y_from_slope(slope_sum / n, cm);
    json fit = {{"window", o.t_max},
                {"delta_mode", to_string(dm)},
                {"mean_slope", slope_sum / n},
                {"mean_r2", r2_sum / n},
                {"fits", fits},
                {"skipped", skipped},
                {"warnings", warnings}};
    run.write("fit.json", fit.dump(2) + "\n");
    json calib = {{"model", to_string(cm)},
                  {"b", cal.b},
                  {"Y_purejump", cal.y_purejump},
                  {"Y_mixed", cal.y_mixed},
                  {"Y", cal.y()},
                  {"admissible", cal.admissible},
                  {"regime_flags", cal.regime_flags}};
    run.write("calibration.json", calib.dump(2) + "\n");
    std::cout << calib.dump(2) << "\n";
    run.finish(o.seed, false);
    return 0;
}

int cmd_synth_chain(const Options& o) {
    Run run("synth-chain", o);
    const McModel m = load_params(o);
    const McConfig c = mc_config(o);
    SyntheticChainSpec spec;
    spec.quote_date = o.quote_date;
    spec.expiry_days = o.days;
    spec.spot = o.spot;
    spec.vix = o.vix;
    spec.half_width = o.half_width;
    spec.log_step = o.log_step;
    record_model(run, m, o);
    record_mc(run, c);
    run.config()["quote_date"] = o.quote_date;
    run.config()["days"] = o.days;
    run.config()["spot"] = o.spot;
    run.config()["vix"] = o.vix;
    run.config()["half_width"] = o.half_width;
    run.config()["log_step"] = o.log_step;
    const auto rows = synthetic_chain(m, spec, c);
    run.write(o.chain_file, chain_to_csv(rows));
    std::cout << rows.size() << " quotes written to " << (fs::path(o.out_dir) / o.chain_file).string() << "\n";
    run.finish(c.seed, true);
    return 0;
}

void add_model_opts(CLI::App* sub, Options& o) {
    sub->add_option("--params", o.params, "Model parameter JSON")->required();
    sub->add_option("--model", o.model_override, "Override the model kind: ts, ts+bm or ts+heston")
        ->check(CLI::IsMember({"ts", "ts+bm", "ts+heston"}));
}

void add_mc_opts(CLI::App* sub, Options& o) {
    sub->add_option("--paths", o.paths, "Monte Carlo paths")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--threads", o.threads, "Worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
    sub->add_option("--steps", o.steps, "Euler steps for the Heston factor")->check(CLI::PositiveNumber);
    sub->add_option("--chunk", o.chunk, "Paths per chunk")->check(CLI::PositiveNumber);
    sub->add_flag("--conditional-bs", o.conditional_bs, "Integrate the Brownian part analytically (ts+bm)");
}

void add_t_opts(CLI::App* sub, Options& o) {
    sub->add_option("--t", o.t_values, "Maturities in years")->delimiter(',');
    sub->add_option("--t-grid", o.t_grid, "Log-spaced maturities a:b:n or a comma list");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Short-maturity skew expansions for tempered-stable models"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);
    Options o;
    app.add_option("--out", o.out_dir, "Output directory");

    auto* coeffs = app.add_subcommand("coeffs", "Expansion coefficients as JSON");
    add_model_opts(coeffs, o);

    auto* eval = app.add_subcommand("eval", "Evaluate an expansion over maturities");
    add_model_opts(eval, o);
    add_t_opts(eval, o);
    eval->add_option("--quantity", o.quantity, "digital, atm_vol, skew or delta")
        ->check(CLI::IsMember({"digital", "atm_vol", "skew", "delta"}));
    eval->add_option("--order", o.order, "1 or 2")->check(CLI::IsMember({1, 2}));

    auto* mc = app.add_subcommand("mc", "Monte Carlo estimates");
    add_model_opts(mc, o);
    add_t_opts(mc, o);
    add_mc_opts(mc, o);
    mc->add_option("--quantity", o.quantity, "digital, atm_vol, skew or delta")
        ->check(CLI::IsMember({"digital", "atm_vol", "skew", "delta"}));
    mc->add_option("--dk", o.dk, "Half-width of the skew finite difference");

    auto* compare = app.add_subcommand("compare", "First and second order expansions against Monte Carlo");
    add_model_opts(compare, o);
    add_t_opts(compare, o);
    add_mc_opts(compare, o);
    compare->add_option("--quantity", o.quantity, "digital, atm_vol, skew or delta")
        ->check(CLI::IsMember({"digital", "atm_vol", "skew", "delta"}));
    compare->add_option("--dk", o.dk, "Half-width of the skew finite difference");

    auto* smile = app.add_subcommand("smile", "Monte Carlo smile with the ATM tangent line");
    add_model_opts(smile, o);
    add_mc_opts(smile, o);
    smile->add_option("--t", o.t_values, "Maturity in years")->required();
    smile->add_option("--kappa-grid", o.kappa_grid, "Log-moneyness grid a:b:n or comma list");

    auto* otm = app.add_subcommand("otm", "OTM skew approximation");
    add_model_opts(otm, o);
    add_t_opts(otm, o);
    otm->add_option("--kappa", o.kappa_grid, "Log-moneyness values, a:b:n or comma list")->required();

    auto* calibrate = app.add_subcommand("calibrate", "Skew series, power-law fit and Y calibration from chains");
    calibrate->add_option("--chains", o.chains, "Chain CSV file or directory")->required();
    calibrate->add_option("--t-max", o.t_max, "Regression window in years")->check(CLI::PositiveNumber);
    calibrate->add_option("--model", o.calib_model, "purejump or mixed")
        ->check(CLI::IsMember({"purejump", "mixed"}));
    calibrate->add_option("--delta-mode", o.delta_mode, "interpolate or nearest")
        ->check(CLI::IsMember({"interpolate", "nearest"}));

    auto* synth = app.add_subcommand("synth-chain", "Write a Monte Carlo option chain in the chain CSV format");
    add_model_opts(synth, o);
    add_mc_opts(synth, o);
    synth->add_option("--days", o.days, "Days to expiry")->delimiter(',');
    synth->add_option("--quote-date", o.quote_date, "Quote date, YYYY-MM-DD");
    synth->add_option("--spot", o.spot, "Spot level")->check(CLI::PositiveNumber);
    synth->add_option("--vix", o.vix, "Volatility index level")->check(CLI::PositiveNumber);
    synth->add_option("--half-width", o.half_width, "Strike range in spot-vol standard deviations");
    synth->add_option("--log-step", o.log_step, "Log-strike spacing");
    synth->add_option("--file", o.chain_file, "Chain file name inside --out");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*coeffs) return cmd_coeffs(o);
        if (*eval) return cmd_eval(o);
        if (*mc) return cmd_mc(o);
        if (*compare) return cmd_compare(o);
        if (*smile) return cmd_smile(o);
        if (*otm) return cmd_otm(o);
        if (*calibrate) return cmd_calibrate(o);
        if (*synth) return cmd_synth_chain(o);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const QuadratureError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const NoConvergence& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
