#include "tsskew/market.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "tsskew/errors.hpp"

namespace tsskew {

namespace {

std::chrono::sys_days parse_date(const std::string& s) {
    int y = 0;
    unsigned m = 0, d = 0;
    char tail = 0;
    if (s.size() != 10 || std::sscanf(s.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3)
        throw DomainError("malformed date '" + s + "' (expected YYYY-MM-DD)");
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok()) throw DomainError("invalid calendar date '" + s + "'");
    return std::chrono::sys_days{ymd};
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& s, const char* column, std::size_t line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("column ") + column + ": cannot parse '" + s + "' as a number", line);
    }
}

const char* kind_name(OptionKind k) { return k == OptionKind::call ? "C" : "P"; }

}  // namespace

double days_between(const std::string& from, const std::string& to) {
    return static_cast<double>((parse_date(to) - parse_date(from)).count());
}

std::string add_days(const std::string& date, int days) {
    const std::chrono::year_month_day ymd{parse_date(date) + std::chrono::days{days}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    return buf;
}

std::vector<ChainSnapshot> parse_chains(const std::string& csv_text) {
    static const std::vector<std::string> columns = {"quote_date", "expiry_date", "type", "strike",
                                                     "bid",        "ask",         "vix"};
    std::istringstream in(csv_text);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::size_t> col;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto header = split(line);
        for (const auto& name : columns) {
            const auto it = std::find(header.begin(), header.end(), name);
            if (it == header.end()) throw SchemaError("chain CSV is missing column '" + name + "'");
            col.push_back(static_cast<std::size_t>(it - header.begin()));
        }
        break;
    }
    if (col.empty()) throw SchemaError("chain CSV has no header");

    std::map<std::string, ChainSnapshot> snaps;
    std::map<std::string, std::map<std::string, ExpiryChain>> chains;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (cells.size() < columns.size()) throw ParseError("expected 7 fields", line_no);
        const std::string& qd = cells[col[0]];
        const std::string& ed = cells[col[1]];
        double days = 0.0;
        try {
            days = days_between(qd, ed);
        } catch (const DomainError& e) {
            throw ParseError(e.what(), line_no);
        }
        const std::string& type = cells[col[2]];
        if (type != "C" && type != "P") throw ParseError("type must be C or P, got '" + type + "'", line_no);
        const double strike = parse_number(cells[col[3]], "strike", line_no);
        const double bid = parse_number(cells[col[4]], "bid", line_no);
        const double ask = parse_number(cells[col[5]], "ask", line_no);
        const double vix = parse_number(cells[col[6]], "vix", line_no);

        ChainSnapshot& snap = snaps[qd];
        snap.quote_date = qd;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (snap.vix == 0.0) snap.vix = vix;
        if (vix != snap.vix) throw ParseError("vix differs from earlier rows of the same date", line_no);
        if (!(strike > 0.0)) {
            snap.rejected.push_back(where + "non-positive strike");
            continue;
        }
        if (bid < 0.0) {
            snap.rejected.push_back(where + "negative bid");
            continue;
        }
        if (ask < bid) {
            snap.rejected.push_back(where + "crossed market (ask < bid)");
            continue;
        }
        if (days <= 0.0) {
            snap.rejected.push_back(where + "expiry not after quote date");
            continue;
        }
        ExpiryChain& ch = chains[qd][ed];
        ch.expiry_date = ed;
        ch.t = days / 365.0;
        ch.quotes.push_back({strike, type == "C" ? OptionKind::call : OptionKind::put, bid, ask});
    }

    std::vector<ChainSnapshot> out;
    for (auto& [qd, snap] : snaps) {
        for (auto& [ed, ch] : chains[qd]) {
            std::stable_sort(ch.quotes.begin(), ch.quotes.end(),
                             [](const ChainQuote& a, const ChainQuote& b) { return a.strike < b.strike; });
            snap.expiries.push_back(std::move(ch));
        }
        std::stable_sort(snap.expiries.begin(), snap.expiries.end(),
                         [](const ExpiryChain& a, const ExpiryChain& b) { return a.t < b.t; });
        out.push_back(std::move(snap));
    }
    return out;
}

std::vector<ChainSnapshot> load_chains(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_chains(ss.str());
}

ChainSnapshot load_chain(const std::string& path) {
    auto snaps = load_chains(path);
    if (snaps.size() != 1)
        throw SchemaError(path + " holds " + std::to_string(snaps.size()) + " quote dates, expected one");
    return std::move(snaps.front());
}

double implied_forward(const ExpiryChain& chain) {
    std::map<double, std::pair<const ChainQuote*, const ChainQuote*>> pairs;
    for (const ChainQuote& q : chain.quotes)
        (q.kind == OptionKind::call ? pairs[q.strike].first : pairs[q.strike].second) = &q;
    double best = INFINITY, forward = 0.0;
    for (const auto& [k, cp] : pairs) {
        if (!cp.first || !cp.second) continue;
        const double diff = cp.first->mid() - cp.second->mid();
        if (std::abs(diff) < best) {
            best = std::abs(diff);
            forward = k + diff;
        }
    }
    if (!std::isfinite(best))
        throw InsufficientQuotes("expiry " + chain.expiry_date + " has no strike quoted for both calls and puts");
    return forward;
}

MarketSmile build_otm_smile(const ExpiryChain& chain, double forward) {
    if (!(forward > 0.0)) throw DomainError("forward must be positive");
    if (!(chain.t > 0.0)) throw DomainError("maturity must be positive");
    MarketSmile s;
    s.forward = forward;
    s.t = chain.t;
    for (const ChainQuote& q : chain.quotes) {
        const OptionKind want = q.strike > forward ? OptionKind::call : OptionKind::put;
        if (q.kind != want) continue;
        try {
            const double iv = implied_vol(q.mid(), forward, q.strike, chain.t, q.kind);
            s.points.push_back({q.strike, std::log(q.strike / forward), iv, q.kind});
        } catch (const OutOfBounds& e) {
            s.warnings.push_back(std::string("strike ") + std::to_string(q.strike) + " " + kind_name(q.kind) +
                                 " skipped: " + e.what());
        } catch (const NoConvergence& e) {
            s.warnings.push_back(std::string("strike ") + std::to_string(q.strike) + " " + kind_name(q.kind) +
                                 " skipped: " + e.what());
        }
    }
    return s;
}

std::string to_string(DeltaMode m) { return m == DeltaMode::interpolate ? "interpolate" : "nearest"; }

DeltaMode delta_mode_from_string(const std::string& s) {
    if (s == "interpolate") return DeltaMode::interpolate;
    if (s == "nearest") return DeltaMode::nearest;
    throw DomainError("unknown delta mode '" + s + "' (expected interpolate or nearest)");
}

namespace {

struct WingPoint {
    double kappa;
    double iv;
    double abs_delta;
};

// Locates |delta| = 0.25 on one wing. Points are ordered from the money outwards, so |delta| decreases.
std::pair<double, double> locate_25(const std::vector<WingPoint>& wing, DeltaMode mode, const char* name) {
    if (wing.empty()) throw MissingWing(std::string("no quotes on the ") + name + " wing");
    if (mode == DeltaMode::nearest) {
        const auto it = std::min_element(wing.begin(), wing.end(), [](const WingPoint& a, const WingPoint& b) {
            return std::abs(a.abs_delta - 0.25) < std::abs(b.abs_delta - 0.25);
        });
        return {it->kappa, it->iv};
    }
    for (std::size_t i = 0; i + 1 < wing.size(); ++i) {
        const WingPoint& a = wing[i];
        const WingPoint& b = wing[i + 1];
        if (a.abs_delta >= 0.25 && b.abs_delta <= 0.25 && a.abs_delta > b.abs_delta) {
            const double w = (a.abs_delta - 0.25) / (a.abs_delta - b.abs_delta);
            return {a.kappa + w * (b.kappa - a.kappa), a.iv + w * (b.iv - a.iv)};
        }
    }
    throw MissingWing(std::string("25-delta point on the ") + name + " wing is not bracketed by quotes");
}

}  // namespace

WingSkew skew_25delta(const MarketSmile& smile, DeltaMode mode) {
    std::vector<WingPoint> puts, calls;
    const double sqt = std::sqrt(smile.t);
    for (const MarketSmilePoint& p : smile.points) {
        const double d1 = (-p.kappa + 0.5 * p.iv * p.iv * smile.t) / (p.iv * sqt);
        if (p.kind == OptionKind::call)
            calls.push_back({p.kappa, p.iv, norm_cdf(d1)});
        else
            puts.push_back({p.kappa, p.iv, norm_cdf(-d1)});
    }
    std::reverse(puts.begin(), puts.end());
    WingSkew w;
    std::tie(w.kappa_put, w.iv_put) = locate_25(puts, mode, "put");
    std::tie(w.kappa_call, w.iv_call) = locate_25(calls, mode, "call");
    if (!(w.kappa_call > w.kappa_put)) throw MissingWing("25-delta strikes coincide");
    w.skew = (w.iv_call - w.iv_put) / (w.kappa_call - w.kappa_put);
    return w;
}

SkewSeries skew_series(const ChainSnapshot& snap, DeltaMode mode) {
    if (!(snap.vix > 0.0)) throw DomainError("VIX level must be positive");
    SkewSeries s;
    s.quote_date = snap.quote_date;
    s.mode = mode;
    for (const ExpiryChain& ch : snap.expiries) {
        if (ch.t * 365.0 < min_maturity_days) continue;
        try {
            const double f = implied_forward(ch);
            const MarketSmile smile = build_otm_smile(ch, f);
            for (const auto& w : smile.warnings) s.warnings.push_back(ch.expiry_date + ": " + w);
            const WingSkew w = skew_25delta(smile, mode);
            s.points.push_back({snap.quote_date, ch.expiry_date, ch.t, w.skew, w.skew / (snap.vix / 100.0)});
        } catch (const DataError& e) {
            s.warnings.push_back(ch.expiry_date + " skipped: " + e.what());
        }
    }
    return s;
}

PowerLawFit fit_powerlaw(const std::vector<SkewPoint>& points, double t_max) {
    std::vector<double> xs, ys;
    int sign = 0;
    for (const SkewPoint& p : points) {
        if (p.t > t_max) continue;
        if (!(p.t > 0.0) || !std::isfinite(p.skew_norm)) throw DomainError("skew point with invalid t or value");
        if (p.skew_norm == 0.0) throw SignMixError("zero skew inside the window");
        const int s = p.skew_norm > 0.0 ? 1 : -1;
        if (sign != 0 && s != sign) throw SignMixError("skews change sign inside the regression window");
        sign = s;
        xs.push_back(std::log(p.t));
        ys.push_back(std::log(std::abs(p.skew_norm)));
    }
    const std::size_t n = xs.size();
    if (n < 3) throw InsufficientQuotes("power-law fit needs at least 3 maturities inside the window");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw InsufficientQuotes("power-law fit needs distinct maturities");
    PowerLawFit f;
    f.slope_b = sxy / sxx;
    f.intercept = my - f.slope_b * mx;
    f.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    f.n_points = static_cast<int>(n);
    f.window = t_max;
    return f;
}

Calibration calibrate_Y_from_slope(double b, CalibrationModel model) {
    Calibration c;
    c.b = b;
    c.model = model;
    c.y_purejump = 2.0 / (1.0 - 2.0 * b);
    c.y_mixed = 1.0 - 2.0 * b;
    c.admissible = b > -0.5 && b < 0.0;
    if (b >= 0.0) c.regime_flags.push_back("continuous_or_jump_diffusion");
    if (b <= -0.5) c.regime_flags.push_back("finite_variation_jumps");
    return c;
}

Calibration calibrate_Y(const PowerLawFit& fit, CalibrationModel model) {
    return calibrate_Y_from_slope(fit.slope_b, model);
}

CalibrationModel calibration_model_from_string(const std::string& s) {
    if (s == "purejump") return CalibrationModel::purejump;
    if (s == "mixed") return CalibrationModel::mixed;
    throw DomainError("unknown calibration model '" + s + "' (expected purejump or mixed)");
}

std::string to_string(CalibrationModel m) { return m == CalibrationModel::mixed ? "mixed" : "purejump"; }

std::string chain_to_csv(const std::vector<ChainRow>& rows) {
    std::string out = "quote_date,expiry_date,type,strike,bid,ask,vix\n";
    char buf[256];
    for (const ChainRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%s,%s,%.17g,%.17g,%.17g,%.17g\n", r.quote_date.c_str(),
                      r.expiry_date.c_str(), kind_name(r.kind), r.strike, r.bid, r.ask, r.vix);
        out += buf;
    }
    return out;
}

void write_chain_csv(const std::string& path, const std::vector<ChainRow>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << chain_to_csv(rows);
}

namespace {

std::vector<double> strike_grid(double vol, double t, const SyntheticChainSpec& spec) {
    if (!(spec.log_step > 0.0) || !(spec.half_width > 0.0)) throw DomainError("strike grid needs positive widths");
    const double half = spec.half_width * vol * std::sqrt(t);
    const int n = static_cast<int>(std::floor(half / spec.log_step));
    std::vector<double> ks;
    for (int i = -n; i <= n; ++i) ks.push_back(i * spec.log_step);
    return ks;
}

}  // namespace

std::vector<ChainRow> synthetic_chain(const McModel& model, const SyntheticChainSpec& spec, const McConfig& cfg) {
    model.validate();
    cfg.validate();
    if (!(spec.spot > 0.0)) throw DomainError("spot must be positive");
    const double vol = model.spot_vol() > 0.0 ? model.spot_vol() : 0.2;
    std::vector<ChainRow> rows;
    for (int days : spec.expiry_days) {
        if (days <= 0) throw DomainError("expiry days must be positive");
        const double t = days / 365.0;
        const std::string ed = add_days(spec.quote_date, days);
        const auto ks = strike_grid(vol, t, spec);
        const SimulatedChain ch = simulate_chain(model, t, ks, cfg);
        for (std::size_t j = 0; j < ks.size(); ++j) {
            const double k = spec.spot * std::exp(ks[j]);
            rows.push_back({spec.quote_date, ed, OptionKind::call, k, spec.spot * ch.calls[j], spec.spot * ch.calls[j],
                            spec.vix});
            rows.push_back({spec.quote_date, ed, OptionKind::put, k, spec.spot * ch.puts[j], spec.spot * ch.puts[j],
                            spec.vix});
        }
    }
    return rows;
}

std::vector<ChainRow> black_scholes_chain(double forward, double vol, const SyntheticChainSpec& spec) {
    if (!(forward > 0.0) || !(vol > 0.0)) throw DomainError("forward and vol must be positive");
    std::vector<ChainRow> rows;
    for (int days : spec.expiry_days) {
        if (days <= 0) throw DomainError("expiry days must be positive");
        const double t = days / 365.0;
        const std::string ed = add_days(spec.quote_date, days);
        for (double kl : strike_grid(vol, t, spec)) {
            const double k = forward * std::exp(kl);
            const double c = bs_price(forward, k, t, vol, OptionKind::call);
            const double p = bs_price(forward, k, t, vol, OptionKind::put);
            rows.push_back({spec.quote_date, ed, OptionKind::call, k, c, c, spec.vix});
            rows.push_back({spec.quote_date, ed, OptionKind::put, k, p, p, spec.vix});
        }
    }
    return rows;
}

}  // namespace tsskew
