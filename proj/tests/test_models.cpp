#include <doctest.h>

#include <cmath>
#include <numbers>

#include "common.hpp"
#include "tsskew/errors.hpp"
#include "tsskew/models.hpp"

using namespace tsskew;

TEST_CASE("gamma_tilde and eta match an independent high-precision quadrature") {
    // mpmath at 60 digits on the tilted-mean integral
    const auto a = derive_constants(fixtures::andersen());
    CHECK(a.gamma_tilde == doctest::Approx(0.0224294460521267).epsilon(1e-10));
    CHECK(a.eta == doctest::Approx(0.0584910963875661).epsilon(1e-10));
    const auto k = derive_constants(fixtures::kawai());
    CHECK(k.gamma_tilde == doctest::Approx(-0.140672114426185).epsilon(1e-10));
    CHECK(k.eta == doctest::Approx(0.661904240388486).epsilon(1e-10));
    const auto f = derive_constants(fixtures::figure3());
    CHECK(f.gamma_tilde == doctest::Approx(0.0125306538763655).epsilon(1e-10));
}

TEST_CASE("closed forms agree with their quadrature versions") {
    for (const auto& p : {fixtures::andersen(), fixtures::kawai(), fixtures::figure3(), fixtures::symmetric()}) {
        const auto c = derive_constants(p);
        CHECK(gamma_tilde_quadrature(p) == doctest::Approx(c.gamma_tilde).epsilon(1e-8));
        CHECK(gamma_tilde_from_drift(p, c.b_drift) == doctest::Approx(c.gamma_tilde).epsilon(1e-8));
        CHECK(eta_quadrature(p) == doctest::Approx(c.eta).epsilon(1e-8));
        CHECK(b_drift_quadrature(p) == doctest::Approx(c.b_drift).epsilon(1e-8));
    }
}

TEST_CASE("gamma_neg uses the reflection through Gamma(2-Y)") {
    CHECK(gamma_neg(1.5) == doctest::Approx(4.0 * std::sqrt(std::numbers::pi) / 3.0).epsilon(1e-14));
}

TEST_CASE("martingale check") {
    CHECK(validate_martingale(fixtures::andersen()).pass);
    TemperedStableParams bad = fixtures::andersen();
    bad.m_plus = 0.9;
    const auto r = validate_martingale(bad);
    CHECK_FALSE(r.pass);
    CHECK(r.reason == "exponential moment diverges (M <= 1)");
    CHECK_THROWS_AS(derive_constants(bad), DomainError);
}

TEST_CASE("parameter validation") {
    TemperedStableParams p = fixtures::andersen();
    p.y_index = 2.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = fixtures::andersen();
    p.c_plus = -1.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = fixtures::andersen();
    p.c_plus = 0.0;
    p.c_minus = 0.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("Heston coefficients") {
    HestonSpec h;
    h.v0 = 0.04;
    h.kappa = 2.0;
    h.theta = 0.05;
    h.xi_volvol = 0.3;
    h.rho = -0.5;
    const StochVolSpec sv = heston_stochvol(h);
    CHECK(sv.spot_vol() == doctest::Approx(0.2));
    CHECK(sv.mu0() == doctest::Approx(-0.02));
    const double eps = 1e-6;
    const double fd = (sv.sigma_fn(h.v0 + eps) - sv.sigma_fn(h.v0 - eps)) / (2.0 * eps);
    CHECK(sv.sigma_prime_fn(h.v0) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(sv.vol_of_vol_term() == doctest::Approx(0.15));
    CHECK(leverage_contribution(sv) == doctest::Approx(-0.5 * 0.15 / 0.4));
    h.xi_volvol = 0.0;
    CHECK_THROWS_AS(heston_stochvol(h), DomainError);
}

TEST_CASE("constant volatility spec") {
    const StochVolSpec sv = constant_vol(0.1);
    CHECK(sv.spot_vol() == 0.1);
    CHECK(sv.mu0() == doctest::Approx(-0.005));
    CHECK(sv.vol_of_vol_term() == 0.0);
    CHECK_THROWS_AS(constant_vol(0.0), DomainError);
}
