#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "common.hpp"
#include "tsskew/blackscholes.hpp"
#include "tsskew/errors.hpp"
#include "tsskew/expansion.hpp"
#include "tsskew/montecarlo.hpp"
#include "tsskew/stable.hpp"

using namespace tsskew;

namespace {

McConfig config(std::int64_t n, std::uint64_t seed = 7) {
    McConfig c;
    c.n_paths = n;
    c.seed = seed;
    return c;
}

// Direct simulation of the compound-Poisson approximation keeping jumps larger than eps,
// with the drift fixed by E exp(X_t) = 1.
double digital_compound_poisson(const TemperedStableParams& p, double t, double eps, int n_paths,
                                std::uint64_t seed, double& se) {
    const double y = p.y_index;
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    auto comp = [&](double c, double rate, int sign) {
        auto f = [&](double x) { return c * (std::exp((sign - rate) * x) - std::exp(-rate * x)) * std::pow(x, -y - 1.0); };
        return ts.integrate(f, eps, 1.0) + es.integrate([&](double u) { return f(u + 1.0); });
    };
    const double drift = -(comp(p.c_plus, p.m_plus, +1) + comp(p.c_minus, p.g_minus, -1));
    // Pareto proposals on (eps, inf) with rate C eps^{-Y} / Y, thinned by the tempering factor.
    const double lam_p = t * p.c_plus * std::pow(eps, -y) / y;
    const double lam_n = t * p.c_minus * std::pow(eps, -y) / y;
    std::mt19937_64 rng(seed);
    std::poisson_distribution<int> np(lam_p), nn(lam_n);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    long hits = 0;
    for (int i = 0; i < n_paths; ++i) {
        double x = drift * t;
        for (int j = np(rng); j > 0; --j) {
            const double z = eps * std::pow(1.0 - u(rng), -1.0 / y);
            if (u(rng) < std::exp(-p.m_plus * z)) x += z;
        }
        for (int j = nn(rng); j > 0; --j) {
            const double z = eps * std::pow(1.0 - u(rng), -1.0 / y);
            if (u(rng) < std::exp(-p.g_minus * z)) x -= z;
        }
        if (x >= 0.0) ++hits;
    }
    const double pr = static_cast<double>(hits) / n_paths;
    se = std::sqrt(pr * (1.0 - pr) / n_paths);
    return pr;
}

}  // namespace

TEST_CASE("results do not depend on the number of threads") {
    const McModel m{ModelKind::ts, fixtures::andersen(), 0.0, {}};
    McConfig a = config(200'000);
    a.n_threads = 1;
    McConfig b = a;
    b.n_threads = 3;
    b.chunk_size = a.chunk_size;
    const auto x = digital_price_mc(m, 0.05, a);
    const auto y = digital_price_mc(m, 0.05, b);
    CHECK(x.value == y.value);
    CHECK(x.std_error == y.std_error);
    const auto sx = skew_fd_mc(m, 0.05, a);
    const auto sy = skew_fd_mc(m, 0.05, b);
    CHECK(sx.value == sy.value);
}

TEST_CASE("chunk streams are pure functions of seed and chunk") {
    auto r1 = chunk_rng(7, 3);
    auto r2 = chunk_rng(7, 3);
    auto r3 = chunk_rng(7, 4);
    const auto a = r1(), b = r2(), c = r3();
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("stable sampler reproduces the distribution function") {
    const TemperedStableParams p = fixtures::kawai();
    const StableLaw law = StableLaw::from_params(p);
    const double t = 1.0;
    const double s = std::pow(law.scale_c, 1.0 / law.y_index);
    auto rng = chunk_rng(99, 0);
    const int n = 400'000;
    const double xs[] = {-2.0 * s, -0.5 * s, 0.0, 0.5 * s, 2.0 * s};
    int below[5] = {0, 0, 0, 0, 0};
    for (int i = 0; i < n; ++i) {
        const double z = sample_one_sided_stable(p.y_index, t, p.c_plus, +1, rng) +
                         sample_one_sided_stable(p.y_index, t, p.c_minus, -1, rng);
        for (int j = 0; j < 5; ++j)
            if (z <= xs[j]) ++below[j];
    }
    for (int j = 0; j < 5; ++j) {
        const double f = cdf(law, xs[j]);
        const double emp = static_cast<double>(below[j]) / n;
        CHECK(std::abs(emp - f) < 4.0 * std::sqrt(f * (1.0 - f) / n));
    }
}

TEST_CASE("tilted-measure digital agrees with direct compound-Poisson simulation") {
    const TemperedStableParams p = fixtures::andersen();
    const double t = 0.05;
    double se_cp = 0.0;
    const double cp = digital_compound_poisson(p, t, 1e-4, 200'000, 5, se_cp);
    const auto mc = digital_price_mc({ModelKind::ts, p, 0.0, {}}, t, config(1'000'000));
    CHECK(std::abs(cp - mc.value) < 3.0 * std::hypot(se_cp, mc.std_error) + 0.002);
}

TEST_CASE("simulated chains satisfy parity against the simulated forward") {
    const McModel m{ModelKind::ts_bm, fixtures::figure3(), 0.1, {}};
    const std::vector<double> ks = {-0.1, -0.02, 0.0, 0.03, 0.1};
    const SimulatedChain ch = simulate_chain(m, 0.05, ks, config(100'000));
    CHECK(ch.forward == doctest::Approx(1.0).epsilon(5.0 * ch.forward_se + 1e-3));
    for (std::size_t j = 0; j < ks.size(); ++j)
        CHECK(ch.calls[j] - ch.puts[j] == doctest::Approx(ch.forward - std::exp(ks[j])).epsilon(1e-12).scale(1.0));
}

TEST_CASE("conditional Black-Scholes estimator agrees with plain sampling") {
    const McModel m{ModelKind::ts_bm, fixtures::figure3(), 0.1, {}};
    McConfig a = config(400'000);
    McConfig b = a;
    b.conditional_bs = true;
    const auto x = digital_price_mc(m, 0.05, a);
    const auto y = digital_price_mc(m, 0.05, b);
    CHECK(std::abs(x.value - y.value) < 4.0 * std::hypot(x.std_error, y.std_error));
    CHECK(y.std_error < x.std_error);
}

TEST_CASE("Heston Euler scheme is stable under step halving") {
    HestonSpec h;
    h.v0 = 0.01;
    h.kappa = 3.0;
    h.theta = 0.01;
    h.xi_volvol = 0.2;
    h.rho = -0.3;
    const McModel m{ModelKind::ts_heston, fixtures::figure3(), 0.0, h};
    McConfig c = config(100'000);
    c.n_steps = 50;
    const auto d50 = digital_price_mc(m, 0.1, c);
    c.n_steps = 100;
    const auto d100 = digital_price_mc(m, 0.1, c);
    c.n_steps = 200;
    const auto d200 = digital_price_mc(m, 0.1, c);
    CHECK(std::abs(d100.value - d200.value) < 4.0 * std::hypot(d100.std_error, d200.std_error));
    CHECK(std::abs(d50.value - d200.value) < 4.0 * std::hypot(d50.std_error, d200.std_error));
}

TEST_CASE("digital price and implied vol give the finite-difference skew") {
    const McModel m{ModelKind::ts, fixtures::andersen(), 0.0, {}};
    const double t = 0.1;
    const McConfig c = config(1'000'000);
    const auto d = digital_price_mc(m, t, c);
    const auto atm = smile_mc(m, t, {0.0}, c).front();
    REQUIRE(atm.ok);
    const auto fd = skew_fd_mc(m, t, c);
    const double rel = skew_from_digital(0.0, t, d.value, atm.iv);
    const double rel_se = std::sqrt(2.0 * std::numbers::pi / t) * d.std_error;
    CHECK(std::abs(rel - fd.value) < 4.0 * std::hypot(rel_se, fd.std_error));
}

TEST_CASE("short-maturity digital prices are close to the expansion") {
    const McModel m{ModelKind::ts, fixtures::kawai(), 0.0, {}};
    const auto d = digital_price_mc(m, 0.01, config(1'000'000));
    CHECK(std::abs(d.value - eval_expansion(m, Quantity::digital, 0.01)) < 4.0 * d.std_error + 1e-3);
}

TEST_CASE("configuration and model validation") {
    CHECK_THROWS_AS(config(10).validate(), DomainError);
    McConfig c = config(10'000);
    c.n_steps = 10;
    CHECK_THROWS_AS(c.validate(), DomainError);
    const McModel bad{ModelKind::ts_bm, fixtures::figure3(), 0.0, {}};
    CHECK_THROWS_AS(bad.validate(), DomainError);
    CHECK_THROWS_AS(digital_price_mc({ModelKind::ts, fixtures::andersen(), 0.0, {}}, 0.0, config(10'000)),
                    DomainError);
    CHECK_THROWS_AS(skew_fd_mc({ModelKind::ts, fixtures::andersen(), 0.0, {}}, 0.1, config(10'000), 0.2),
                    DomainError);
    CHECK(model_kind_from_string("ts+heston") == ModelKind::ts_heston);
    CHECK(to_string(ModelKind::ts_bm) == "ts+bm");
    CHECK_THROWS_AS(model_kind_from_string("bates"), DomainError);
}
