#include <doctest.h>

#include <cmath>
#include <vector>

#include "common.hpp"
#include "tsskew/errors.hpp"
#include "tsskew/montecarlo.hpp"
#include "tsskew/otm.hpp"

using namespace tsskew;

namespace {

OtmInputs inputs(const TemperedStableParams& p, double kappa) {
    OtmInputs in;
    in.kappa = kappa;
    in.levy = p;
    return in;
}

// Plain trapezoid rule with 10^6 nodes over [a, b].
template <class F>
double trapezoid(F f, double a, double b) {
    const int n = 1'000'000;
    const double h = (b - a) / n;
    double s = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n; ++i) s += f(a + i * h);
    return s * h;
}

double levy_density(const TemperedStableParams& p, double x) {
    const double y = p.y_index;
    return x > 0.0 ? p.c_plus * std::exp(-p.m_plus * x) * std::pow(x, -y - 1.0)
                   : p.c_minus * std::exp(-p.g_minus * -x) * std::pow(-x, -y - 1.0);
}

}  // namespace

TEST_CASE("a0 and b0 against a trapezoid rule") {
    const TemperedStableParams sym = fixtures::symmetric();
    for (const auto& p : {sym, fixtures::andersen()})
        for (double k : {0.05, -0.05, 0.3, -0.3}) {
            const OtmConstants c = otm_constants(inputs(p, k));
            const double ek = std::exp(k);
            double a0, mass;
            if (k > 0.0) {
                a0 = trapezoid([&](double x) { return (std::exp(x) - ek) * levy_density(p, x); }, k, k + 40.0);
                mass = trapezoid([&](double x) { return levy_density(p, x); }, k, k + 40.0);
            } else {
                a0 = trapezoid([&](double x) { return (ek - std::exp(x)) * levy_density(p, x); }, k - 60.0, k);
                mass = trapezoid([&](double x) { return levy_density(p, x); }, k - 60.0, k);
            }
            CHECK(c.a0 == doctest::Approx(a0).epsilon(1e-6));
            CHECK(c.b0 == doctest::Approx(-ek * mass).epsilon(1e-6));
            CHECK(levy_tail_mass(p, k) == doctest::Approx(mass).epsilon(1e-6));
        }
}

TEST_CASE("symmetric measure: a0(-k) e^{k} = a0(k) e^{-k} evaluated by quadrature") {
    // With G = M the positive branch at k and the negative branch at -k differ by the weights
    // (e^x - e^k) versus (e^{-k} - e^{-x}) = e^{-k-x}(e^x - e^k).
    TemperedStableParams p = fixtures::symmetric();
    p.g_minus = p.m_plus;
    for (double k : {0.1, 0.4}) {
        const double neg = otm_constants(inputs(p, -k)).a0;
        const double direct = trapezoid(
            [&](double x) { return std::exp(-k - x) * (std::exp(x) - std::exp(k)) * levy_density(p, x); }, k,
            k + 40.0);
        CHECK(neg == doctest::Approx(direct).epsilon(1e-6));
    }
}

TEST_CASE("tails vanish far out of the money") {
    const OtmConstants c = otm_constants(inputs(fixtures::andersen(), 10.0));
    CHECK(std::abs(c.a0) < 1e-8);
    CHECK(std::abs(c.b0) < 1e-8);
    const OtmConstants d = otm_constants(inputs(fixtures::kawai(), -10.0));
    CHECK(std::abs(d.a0) < 1e-8);
    CHECK(std::abs(d.b0) < 1e-8);
    CHECK(levy_tail_mass(fixtures::kawai(), 400.0) >= 0.0);
}

TEST_CASE("a0 decreases in |kappa|") {
    for (double sgn : {1.0, -1.0}) {
        double prev = INFINITY;
        for (double k : {0.01, 0.05, 0.1, 0.5, 1.0, 2.0}) {
            const double a0 = otm_constants(inputs(fixtures::andersen(), sgn * k)).a0;
            CHECK(a0 < prev);
            prev = a0;
        }
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(otm_constants(inputs(fixtures::andersen(), 0.0)), DomainError);
    CHECK_THROWS_AS(otm_skew(inputs(fixtures::andersen(), 0.1), std::exp(-1.0)), DomainError);
    CHECK_THROWS_AS(otm_skew(inputs(fixtures::andersen(), 0.1), 0.5), DomainError);
    CHECK_THROWS_AS(otm_skew(inputs(fixtures::andersen(), 0.0), 0.01), DomainError);
}

TEST_CASE("V1 vanishes and the skew approaches sign(kappa) / sqrt(2 t ln(1/t)) as t -> 0") {
    for (double k : {0.05, -0.05, 0.2}) {
        const OtmInputs in = inputs(fixtures::andersen(), k);
        double prev_v = INFINITY, gap = 0.0;
        for (double t : {1e-8, 1e-16, 1e-32, 1e-64, 1e-128}) {
            const double v = std::abs(otm_v1(in, t));
            const double l = std::log(1.0 / t);
            gap = std::abs(otm_skew(in, t) * std::sqrt(2.0 * t * l) - (k > 0.0 ? 1.0 : -1.0));
            CHECK(v < prev_v);
            prev_v = v;
        }
        CHECK(prev_v < 0.1);
        CHECK(gap < 0.05);
    }
}

TEST_CASE("OTM skew changes sign with kappa and is continuous on each side") {
    const double t = 0.01;
    for (double k : {0.02, 0.1, 0.3}) {
        CHECK(otm_skew(inputs(fixtures::andersen(), k), t) > 0.0);
        CHECK(otm_skew(inputs(fixtures::andersen(), -k), t) < 0.0);
        const double a = otm_skew(inputs(fixtures::andersen(), k), t);
        const double b = otm_skew(inputs(fixtures::andersen(), k * (1.0 + 1e-7)), t);
        CHECK(a == doctest::Approx(b).epsilon(1e-5));
    }
}

TEST_CASE("OTM skew against a Monte Carlo smile finite difference") {
    // The expansion is accurate to o(1/ln(1/t)): the gap shrinks as t decreases.
    const McModel m{ModelKind::ts, fixtures::andersen(), 0.0, {}};
    McConfig cfg;
    cfg.n_paths = 4'000'000;
    const double k = 0.05;
    const OtmInputs in = inputs(fixtures::andersen(), k);
    std::vector<double> gaps;
    for (double t : {0.05, 0.01, 0.002}) {
        const auto pts = smile_mc(m, t, {0.99 * k, 1.01 * k}, cfg);
        REQUIRE(pts[0].ok);
        REQUIRE(pts[1].ok);
        const double fd = (pts[1].iv - pts[0].iv) / (0.02 * k);
        const double approx = otm_skew(in, t);
        gaps.push_back(std::abs(approx - fd) / std::abs(fd));
        MESSAGE("t = " << t << ": expansion " << approx << ", Monte Carlo " << fd);
    }
    CHECK(gaps[0] < 0.35);
    CHECK(gaps[1] < 0.25);
    CHECK(gaps[2] < 0.10);
    CHECK(gaps[2] < gaps[1]);
    CHECK(gaps[1] < gaps[0]);
}
