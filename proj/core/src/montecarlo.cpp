#include "tsskew/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chunked.hpp"
#include "tsskew/blackscholes.hpp"
#include "tsskew/errors.hpp"

namespace tsskew {

constexpr double pi = std::numbers::pi;

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::ts: return "ts";
        case ModelKind::ts_bm: return "ts+bm";
        case ModelKind::ts_heston: return "ts+heston";
    }
    return "ts";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "ts") return ModelKind::ts;
    if (s == "ts+bm") return ModelKind::ts_bm;
    if (s == "ts+heston") return ModelKind::ts_heston;
    throw DomainError("unknown model kind '" + s + "' (expected ts, ts+bm or ts+heston)");
}

void McModel::validate() const {
    params.validate();
    if (!(params.m_plus > 1.0)) throw DomainError("simulation needs M > 1 for a martingale");
    if (kind == ModelKind::ts_bm && !(sigma > 0.0)) throw DomainError("ts+bm needs sigma > 0");
    if (kind == ModelKind::ts_heston) heston.validate();
}

double McModel::spot_vol() const {
    switch (kind) {
        case ModelKind::ts: return 0.0;
        case ModelKind::ts_bm: return sigma;
        case ModelKind::ts_heston: return std::sqrt(heston.v0);
    }
    return 0.0;
}

void McConfig::validate() const {
    if (n_paths < 1000) throw DomainError("n_paths must be at least 1000");
    if (chunk_size < 1) throw DomainError("chunk_size must be positive");
    if (n_steps < 50) throw DomainError("n_steps must be at least 50");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t chunk_index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(chunk_index + 0x632BE59BD9B4E019ULL)));
}

double sample_one_sided_stable(double y, double t, double c_side, int sign, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-pi / 2.0, pi / 2.0);
    std::exponential_distribution<double> expo(1.0);
    double v = unif(rng);
    while (v == -pi / 2.0) v = unif(rng);
    const double w = expo(rng);
    if (c_side <= 0.0) return 0.0;
    const double scale = std::pow(t * c_side * std::abs(std::cos(pi * y / 2.0)) * gamma_neg(y), 1.0 / y);
    const double beta = sign > 0 ? 1.0 : -1.0;
    const double tan_a = std::tan(pi * y / 2.0);
    const double b = std::atan(beta * tan_a) / y;
    const double s = std::pow(1.0 + beta * beta * tan_a * tan_a, 1.0 / (2.0 * y));
    const double x = s * std::sin(y * (v + b)) / std::pow(std::cos(v), 1.0 / y) *
                     std::pow(std::cos(v - y * (v + b)) / w, (1.0 - y) / y);
    return scale * x;
}

namespace {

struct PathDraw {
    double log_weight = 0.0;  // -M Zp + G Zn - eta t
    double jump = 0.0;        // Zp + Zn + gamma_tilde t
    double cont = 0.0;        // V_t, zero when integrated analytically
};

class PathSampler {
public:
    PathSampler(const McModel& m, double t, const McConfig& cfg) : model_(m), t_(t), cfg_(cfg) {
        model_.validate();
        cfg_.validate();
        if (!(t > 0.0)) throw DomainError("maturity must be positive");
        consts_ = derive_constants(model_.params);
        analytic_bm_ = cfg_.conditional_bs && model_.kind == ModelKind::ts_bm;
    }

    bool analytic_bm() const { return analytic_bm_; }
    double total_sd() const { return model_.sigma * std::sqrt(t_); }

    PathDraw draw(std::mt19937_64& rng) const {
        const auto& p = model_.params;
        const double zp = sample_one_sided_stable(p.y_index, t_, p.c_plus, +1, rng);
        const double zn = sample_one_sided_stable(p.y_index, t_, p.c_minus, -1, rng);
        PathDraw d;
        d.log_weight = -p.m_plus * zp + p.g_minus * zn - consts_.eta * t_;
        d.jump = zp + zn + consts_.gamma_tilde * t_;
        if (model_.kind == ModelKind::ts_bm && !analytic_bm_) {
            std::normal_distribution<double> nd;
            const double s = model_.sigma;
            d.cont = -0.5 * s * s * t_ + s * std::sqrt(t_) * nd(rng);
        } else if (model_.kind == ModelKind::ts_heston) {
            d.cont = heston_path(rng);
        }
        return d;
    }

private:
    // Euler with full truncation of the variance.
    double heston_path(std::mt19937_64& rng) const {
        const auto& h = model_.heston;
        std::normal_distribution<double> nd;
        const int n = cfg_.n_steps;
        const double dt = t_ / n;
        const double sq = std::sqrt(dt);
        const double rho_c = std::sqrt(1.0 - h.rho * h.rho);
        double v = h.v0, x = 0.0;
        for (int i = 0; i < n; ++i) {
            const double z1 = nd(rng);
            const double z2 = nd(rng);
            const double vp = std::max(v, 0.0);
            const double sv = std::sqrt(vp);
            x += -0.5 * vp * dt + sv * sq * (h.rho * z1 + rho_c * z2);
            v += h.kappa * (h.theta - vp) * dt + h.xi_volvol * sv * sq * z1;
        }
        return x;
    }

    McModel model_;
    double t_;
    McConfig cfg_;
    DerivedConstants consts_;
    bool analytic_bm_ = false;
};

struct Payoffs {
    double digital;
    double call;
    double put;
    double forward;
};

// Weighted payoffs at log-strike k, exact in log space to avoid overflow of the weight.
Payoffs payoffs(const PathSampler& s, const PathDraw& d, double k) {
    Payoffs r{};
    if (s.analytic_bm()) {
        const double v = s.total_sd();
        const double d1 = (d.jump - k + 0.5 * v * v) / v;
        const double d2 = d1 - v;
        const double ws = std::exp(d.log_weight + d.jump);
        const double wk = std::exp(d.log_weight + k);
        r.digital = std::exp(d.log_weight) * norm_cdf(d2);
        r.call = ws * norm_cdf(d1) - wk * norm_cdf(d2);
        r.put = wk * norm_cdf(-d2) - ws * norm_cdf(-d1);
        r.forward = ws;
        return r;
    }
    const double x = d.jump + d.cont;
    r.forward = std::exp(d.log_weight + x);
    if (x >= k) {
        r.digital = std::exp(d.log_weight);
        r.call = r.forward - std::exp(d.log_weight + k);
        r.put = 0.0;
    } else {
        r.digital = 0.0;
        r.call = 0.0;
        r.put = std::exp(d.log_weight + k) - r.forward;
    }
    return r;
}

double std_error(double s1, double s2, double n) {
    const double m = s1 / n;
    return std::sqrt(std::max(0.0, s2 / n - m * m) / n);
}

}  // namespace

McEstimate digital_price_mc(const McModel& model, double t, const McConfig& cfg, double kappa) {
    PathSampler sampler(model, t, cfg);
    auto sums = detail::run_chunks(cfg.n_paths, cfg.chunk_size, cfg.seed, cfg.n_threads, 2,
                                   [&](std::mt19937_64& rng, std::int64_t n, std::vector<detail::KahanSum>& acc) {
                                       for (std::int64_t i = 0; i < n; ++i) {
                                           const double v = payoffs(sampler, sampler.draw(rng), kappa).digital;
                                           acc[0].add(v);
                                           acc[1].add(v * v);
                                       }
                                   });
    const double n = static_cast<double>(cfg.n_paths);
    return {sums[0] / n, std_error(sums[0], sums[1], n), cfg.n_paths};
}

std::vector<SmilePoint> smile_mc(const McModel& model, double t, const std::vector<double>& kappas,
                                 const McConfig& cfg) {
    PathSampler sampler(model, t, cfg);
    const std::size_t m = kappas.size();
    auto sums = detail::run_chunks(cfg.n_paths, cfg.chunk_size, cfg.seed, cfg.n_threads, 2 * m,
                                   [&](std::mt19937_64& rng, std::int64_t n, std::vector<detail::KahanSum>& acc) {
                                       for (std::int64_t i = 0; i < n; ++i) {
                                           const PathDraw d = sampler.draw(rng);
                                           for (std::size_t j = 0; j < m; ++j) {
                                               const double c = payoffs(sampler, d, kappas[j]).call;
                                               acc[2 * j].add(c);
                                               acc[2 * j + 1].add(c * c);
                                           }
                                       }
                                   });
    const double n = static_cast<double>(cfg.n_paths);
    std::vector<SmilePoint> out(m);
    for (std::size_t j = 0; j < m; ++j) {
        SmilePoint& sp = out[j];
        sp.kappa = kappas[j];
        sp.price = sums[2 * j] / n;
        sp.price_se = std_error(sums[2 * j], sums[2 * j + 1], n);
        try {
            sp.iv = implied_vol(sp.price, 1.0, std::exp(sp.kappa), t, OptionKind::call);
            sp.iv_se = sp.price_se / bs_vega(1.0, std::exp(sp.kappa), t, sp.iv);
            sp.ok = true;
        } catch (const OutOfBounds&) {
            sp.ok = false;
        } catch (const NoConvergence&) {
            sp.ok = false;
        }
    }
    return out;
}

McEstimate skew_fd_mc(const McModel& model, double t, const McConfig& cfg, double dk) {
    if (!(dk >= 0.001 && dk <= 0.05)) throw DomainError("dk must lie in [0.001, 0.05]");
    PathSampler sampler(model, t, cfg);
    auto sums = detail::run_chunks(cfg.n_paths, cfg.chunk_size, cfg.seed, cfg.n_threads, 5,
                                   [&](std::mt19937_64& rng, std::int64_t n, std::vector<detail::KahanSum>& acc) {
                                       for (std::int64_t i = 0; i < n; ++i) {
                                           const PathDraw d = sampler.draw(rng);
                                           const double a = payoffs(sampler, d, dk).call;
                                           const double b = payoffs(sampler, d, -dk).call;
                                           acc[0].add(a);
                                           acc[1].add(a * a);
                                           acc[2].add(b);
                                           acc[3].add(b * b);
                                           acc[4].add(a * b);
                                       }
                                   });
    const double n = static_cast<double>(cfg.n_paths);
    const double ma = sums[0] / n, mb = sums[2] / n;
    const double kp = std::exp(dk), km = std::exp(-dk);
    const double iv_p = implied_vol(ma, 1.0, kp, t, OptionKind::call);
    const double iv_m = implied_vol(mb, 1.0, km, t, OptionKind::call);
    const double vp = bs_vega(1.0, kp, t, iv_p), vm = bs_vega(1.0, km, t, iv_m);
    const double var_a = std::max(0.0, sums[1] / n - ma * ma);
    const double var_b = std::max(0.0, sums[3] / n - mb * mb);
    const double cov = sums[4] / n - ma * mb;
    const double var = (var_a / (vp * vp) + var_b / (vm * vm) - 2.0 * cov / (vp * vm)) / (4.0 * dk * dk);
    return {(iv_p - iv_m) / (2.0 * dk), std::sqrt(std::max(0.0, var) / n), cfg.n_paths};
}

SimulatedChain simulate_chain(const McModel& model, double t, const std::vector<double>& log_strikes,
                              const McConfig& cfg) {
    PathSampler sampler(model, t, cfg);
    const std::size_t m = log_strikes.size();
    auto sums = detail::run_chunks(cfg.n_paths, cfg.chunk_size, cfg.seed, cfg.n_threads, 3 + 2 * m,
                                   [&](std::mt19937_64& rng, std::int64_t n, std::vector<detail::KahanSum>& acc) {
                                       for (std::int64_t i = 0; i < n; ++i) {
                                           const PathDraw d = sampler.draw(rng);
                                           const double w = std::exp(d.log_weight);
                                           acc[0].add(w);
                                           const double f = payoffs(sampler, d, 0.0).forward;
                                           acc[1].add(f);
                                           acc[2].add(f * f);
                                           for (std::size_t j = 0; j < m; ++j) {
                                               const Payoffs p = payoffs(sampler, d, log_strikes[j]);
                                               acc[3 + 2 * j].add(p.call);
                                               acc[4 + 2 * j].add(p.put);
                                           }
                                       }
                                   });
    // Self-normalized by the weight total so put-call parity holds exactly on the sample.
    const double n = static_cast<double>(cfg.n_paths);
    const double wsum = sums[0];
    SimulatedChain out;
    out.log_strikes = log_strikes;
    out.forward = sums[1] / wsum;
    out.forward_se = std_error(sums[1], sums[2], n);
    out.calls.resize(m);
    out.puts.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        out.calls[j] = sums[3 + 2 * j] / wsum;
        out.puts[j] = sums[4 + 2 * j] / wsum;
    }
    return out;
}

}  // namespace tsskew
