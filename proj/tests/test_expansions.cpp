#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <map>
#include <numbers>

#include "common.hpp"
#include "tsskew/bundle.hpp"
#include "tsskew/errors.hpp"
#include "tsskew/expansion.hpp"
#include "tsskew/mixed.hpp"
#include "tsskew/purejump.hpp"

using namespace tsskew;

namespace {

const double sqrt_2pi = std::sqrt(2.0 * std::numbers::pi);

// Generalized power series: exponent -> coefficient, exponents rounded so sums of exponents compare equal.
using Series = std::map<double, double>;

double key(double e) { return std::round(e * 1e9) / 1e9; }

Series series_of(const TermList& terms) {
    Series s;
    for (const Term& t : terms) s[key(t.exponent)] += t.coeff;
    return s;
}

Series scaled(const Series& s, double c, double shift) {
    Series out;
    for (const auto& [e, v] : s) out[key(e + shift)] += c * v;
    return out;
}

Series add(Series a, const Series& b) {
    for (const auto& [e, v] : b) a[e] += v;
    return a;
}

Series multiply(const Series& a, const Series& b) {
    Series out;
    for (const auto& [ea, va] : a)
        for (const auto& [eb, vb] : b) out[key(ea + eb)] += va * vb;
    return out;
}

// sqrt(2 pi / t) (1/2 - D - v / (2 sqrt(2 pi))) (1 + v^2 / 8) with v = sigma_hat sqrt(t), truncated at max_exp.
Series relation_skew(const TermList& digital, const TermList& atm_vol, double max_exp) {
    const Series d = series_of(digital);
    const Series v = scaled(series_of(atm_vol), 1.0, 0.5);
    Series inner = add(add(Series{{0.0, 0.5}}, scaled(d, -1.0, 0.0)), scaled(v, -1.0 / (2.0 * sqrt_2pi), 0.0));
    Series corr = add(Series{{0.0, 1.0}}, scaled(multiply(v, v), 0.125, 0.0));
    Series full = scaled(multiply(inner, corr), sqrt_2pi, -0.5);
    Series out;
    for (const auto& [e, c] : full)
        if (e <= max_exp + 1e-12) out[e] += c;
    return out;
}

void check_same_series(const Series& a, const Series& b) {
    for (const auto& [e, v] : add(a, scaled(b, -1.0, 0.0))) {
        const double ref = std::max(std::abs(b.count(e) ? b.at(e) : 0.0), std::abs(a.count(e) ? a.at(e) : 0.0));
        INFO("exponent " << e);
        CHECK(std::abs(v) <= 1e-10 * std::max(ref, 1e-300) + 1e-15);
    }
}

double max_exponent(const TermList& t) {
    double m = -1e300;
    for (const Term& x : t) m = std::max(m, x.exponent);
    return m;
}

}  // namespace

TEST_CASE("pure-jump expansion: skew values at t = 0.1") {
    CHECK(eval_purejump(build_purejump(fixtures::andersen()), Quantity::skew, 0.1) ==
          doctest::Approx(0.321425).epsilon(1e-5));
    CHECK(eval_purejump(build_purejump(fixtures::kawai()), Quantity::skew, 0.1) ==
          doctest::Approx(-0.467311).epsilon(1e-5));
}

TEST_CASE("pure-jump expansion: coefficients") {
    const PureJumpBundle b = build_purejump(fixtures::andersen());
    CHECK(b.n_order == 3);
    CHECK(b.p0 == doctest::Approx(0.431722411766956).epsilon(1e-12));
    CHECK(b.sigma1 == doctest::Approx(0.0678753125579946).epsilon(1e-12));
    // d_k from gamma_tilde and the mpmath density derivatives at zero
    const double gt = 0.0224294460521267;
    CHECK(b.d_terms[0].coeff == doctest::Approx(gt * 3.44650720166).epsilon(1e-9));
    CHECK(b.d_terms[1].coeff == doctest::Approx(-gt * gt * -11.8773402781 / 2.0).epsilon(1e-9));
    CHECK(b.d_terms[2].coeff == doctest::Approx(gt * gt * gt * -314.011932776 / 6.0).epsilon(1e-9));
    CHECK(b.d_terms[2].exponent == doctest::Approx(1.0));
    CHECK(b.e_term.exponent == doctest::Approx(1.0 / 1.5));
}

TEST_CASE("pure-jump order") {
    CHECK(purejump_order(1.5) == 3);
    CHECK(purejump_order(1.35) == 3);
    CHECK(purejump_order(1.9) == 2);
    CHECK(purejump_order(1.2) == 6);
    CHECK_THROWS_AS(purejump_order(2.0), DomainError);
}

TEST_CASE("mixed expansion: Figure 3 coefficients") {
    const MixedBundle b = build_mixed(fixtures::figure3(), constant_vol(0.1));
    CHECK(b.n_order == 3);
    CHECK(b.e_term.coeff == doctest::Approx(0.0300430).epsilon(1e-5));
    CHECK(b.f_term.coeff == doctest::Approx(-0.0463294).epsilon(1e-5));
    CHECK(b.sigma_bar1 == doctest::Approx(0.0481752).epsilon(1e-5));
    CHECK(b.c_skew == doctest::Approx(0.0125306538763655).epsilon(1e-9));
    CHECK(eval_mixed(b, Quantity::skew, 0.1) == doctest::Approx(0.10128).epsilon(1e-4));
    CHECK(eval_mixed(b, Quantity::digital, 0.1) == doctest::Approx(0.479206).epsilon(1e-5));
}

TEST_CASE("mixed order is not capped at three") {
    CHECK(mixed_order(1.5) == 3);
    CHECK(mixed_order(1.7) == 4);
    CHECK(mixed_order(1.9) == 11);
    const MixedBundle b = build_mixed({0.004, 0.001, 0.5, 2.0, 1.8}, constant_vol(0.1));
    CHECK(b.d_terms.size() == 6);
}

TEST_CASE("xi closed form matches the defining integral") {
    for (double y : {1.2, 1.5, 1.8})
        for (double s : {0.05, 0.3}) {
            boost::math::quadrature::exp_sinh<double> es;
            const double num = es.integrate([&](double x) {
                return std::exp(-0.5 * x * x / (s * s)) / (s * sqrt_2pi) * std::pow(x, 1.0 - y);
            });
            CHECK(xi_closed_form(s, y) == doctest::Approx(num).epsilon(1e-10));
        }
}

TEST_CASE("delta minus digital is the ATM call price implied by the vol expansion") {
    const McModel models[] = {{ModelKind::ts, fixtures::andersen(), 0.0, {}},
                              {ModelKind::ts_bm, fixtures::figure3(), 0.1, {}}};
    for (const McModel& m : models)
        for (double t : {1e-3, 0.02, 0.1}) {
            const double diff = eval_expansion(m, Quantity::delta, t) - eval_expansion(m, Quantity::digital, t);
            const double call = eval_expansion(m, Quantity::atm_vol, t) * std::sqrt(t) / sqrt_2pi;
            CHECK(diff == doctest::Approx(call).epsilon(1e-12));
        }
}

TEST_CASE("ATM skew relation reproduces the skew expansion coefficient by coefficient") {
    SUBCASE("pure jump") {
        for (const auto& p : {fixtures::andersen(), fixtures::kawai()}) {
            const PureJumpBundle b = build_purejump(p);
            const TermList skew = purejump_terms(b, Quantity::skew);
            const Series rel =
                relation_skew(purejump_terms(b, Quantity::digital), purejump_terms(b, Quantity::atm_vol),
                           max_exponent(skew));
            check_same_series(rel, series_of(skew));
        }
    }
    SUBCASE("mixed") {
        HestonSpec h;
        h.v0 = 0.01;
        h.kappa = 2.0;
        h.theta = 0.02;
        h.xi_volvol = 0.3;
        h.rho = -0.4;
        for (const StochVolSpec& sv : {constant_vol(0.1), heston_stochvol(h)}) {
            const MixedBundle b = build_mixed(fixtures::figure3(), sv);
            const TermList skew = mixed_terms(b, Quantity::skew);
            const Series rel =
                relation_skew(mixed_terms(b, Quantity::digital), mixed_terms(b, Quantity::atm_vol), max_exponent(skew));
            check_same_series(rel, series_of(skew));
        }
    }
}

TEST_CASE("leverage adds rho sigma' gamma / (2 sigma0) to the short-time skew") {
    HestonSpec h;
    h.v0 = 0.01;
    h.kappa = 2.0;
    h.theta = 0.01;
    h.xi_volvol = 0.3;
    h.rho = -0.5;
    const MixedBundle with = build_mixed(fixtures::figure3(), heston_stochvol(h));
    h.rho = 0.0;
    const MixedBundle without = build_mixed(fixtures::figure3(), heston_stochvol(h));
    const double t = 1e-12;
    const double diff = eval_mixed(with, Quantity::skew, t) - eval_mixed(without, Quantity::skew, t);
    CHECK(diff == doctest::Approx(-0.5 * 0.15 / (2.0 * 0.1)).epsilon(1e-2));
}

TEST_CASE("symmetric jumps flatten the mixed skew, asymmetric jumps make it explode") {
    const MixedBundle sym = build_mixed(fixtures::symmetric(), constant_vol(0.15));
    const double lim = -sym.c_skew / 0.15;
    CHECK(eval_mixed(sym, Quantity::skew, 1e-8) == doctest::Approx(lim).epsilon(1e-3));
    CHECK(std::abs(eval_mixed(sym, Quantity::skew, 1e-5)) < 1.0);

    const MixedBundle asym = build_mixed(fixtures::figure3(), constant_vol(0.1));
    const double y = fixtures::figure3().y_index;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double lt = std::log(1e-12); lt <= std::log(1e-8) + 1e-9; lt += 0.25 * std::log(10.0)) {
        const double ly = std::log(std::abs(eval_mixed(asym, Quantity::skew, std::exp(lt))));
        sx += lt;
        sy += ly;
        sxx += lt * lt;
        sxy += lt * ly;
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(std::abs(slope - (1.0 - y) / 2.0) < 0.02);
}

TEST_CASE("short-time skew has the sign of C(1) - C(-1)") {
    CHECK(eval_purejump(build_purejump(fixtures::andersen()), Quantity::skew, 1e-4) > 0.0);
    CHECK(eval_purejump(build_purejump(fixtures::kawai()), Quantity::skew, 1e-4) < 0.0);
    CHECK(eval_mixed(build_mixed(fixtures::figure3(), constant_vol(0.1)), Quantity::skew, 1e-6) > 0.0);
    TemperedStableParams neg = fixtures::figure3();
    std::swap(neg.c_plus, neg.c_minus);
    CHECK(eval_mixed(build_mixed(neg, constant_vol(0.1)), Quantity::skew, 1e-6) < 0.0);
}

TEST_CASE("first order keeps the leading terms only") {
    const PureJumpBundle b = build_purejump(fixtures::andersen());
    for (const Term& t : purejump_terms(b, Quantity::digital, 1)) CHECK(t.exponent <= 1.0 / 1.5 + 1e-12);
    CHECK(purejump_terms(b, Quantity::digital, 1).size() == purejump_terms(b, Quantity::digital, 2).size() - 2);
    const MixedBundle m = build_mixed(fixtures::figure3(), constant_vol(0.1));
    for (const Term& t : mixed_terms(m, Quantity::digital, 1)) CHECK(t.exponent <= 0.5 + 1e-12);
}

TEST_CASE("expansion bundles survive a JSON roundtrip") {
    const McModel m{ModelKind::ts_bm, fixtures::figure3(), 0.1, {}};
    const ExpansionBundle b = expansion_bundle(m);
    const ExpansionBundle r = bundle_from_json(bundle_to_json(b));
    CHECK(r.model == "mixed");
    for (Quantity q : {Quantity::digital, Quantity::atm_vol, Quantity::skew, Quantity::delta})
        CHECK(eval_terms(r.terms.at(q), 0.05) == eval_terms(b.terms.at(q), 0.05));
    CHECK(r.meta.at("Y") == 1.5);
    CHECK_THROWS_AS(bundle_from_json("{\"model\": 3}"), SchemaError);
    CHECK_THROWS_AS(bundle_from_json("not json"), SchemaError);
}

TEST_CASE("invalid inputs") {
    TemperedStableParams p = fixtures::andersen();
    p.m_plus = 1.0;
    CHECK_THROWS_AS(build_purejump(p), DomainError);
    CHECK_THROWS_AS(eval_purejump(build_purejump(fixtures::andersen()), Quantity::skew, 0.0), DomainError);
    CHECK_THROWS_AS(quantity_from_string("gamma"), DomainError);
}
