#include "tsskew/purejump.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tsskew/errors.hpp"

namespace tsskew {

namespace {
const double sqrt_2pi = std::sqrt(2.0 * std::numbers::pi);
}

int purejump_order(double y) {
    if (!(y > 1.0 && y < 2.0)) throw DomainError("Y must lie in (1,2)");
    int n = 1;
    while ((n + 1) * (1.0 - 1.0 / y) <= 1.0 + 1e-12) ++n;
    return n;
}

PureJumpBundle build_purejump(const TemperedStableParams& p) {
    p.validate();
    PureJumpBundle b;
    b.params = p;
    b.consts = derive_constants(p);
    const double y = p.y_index, m = p.m_plus, g = p.g_minus;
    const double gy = gamma_neg(y);
    const double gt = b.consts.gamma_tilde;
    const StableLaw law = StableLaw::from_params(p);
    b.p0 = positivity(law);
    b.n_order = purejump_order(y);
    double fact = 1.0;
    for (int k = 1; k <= b.n_order; ++k) {
        fact *= k;
        const double sign = (k - 1) % 2 == 0 ? 1.0 : -1.0;
        const double dk = sign * std::pow(gt, k) * density_deriv_at_zero(law, k) / fact;
        b.d_terms.push_back({"d" + std::to_string(k), dk, k * (1.0 - 1.0 / y)});
    }
    b.functionals = one_sided_functionals_exact(OneSidedPair::from_params(p));
    const double e = p.alpha_plus() * b.functionals.p_indicator + p.alpha_minus() * b.functionals.n_indicator;
    b.e_term = {"e", e, 1.0 / y};
    const double f = gt * (p.alpha_plus() - p.alpha_minus()) * b.functionals.p_density +
                     gy * ((1.0 - b.p0) * p.c_plus * std::pow(m, y) - b.p0 * p.c_minus * std::pow(g, y));
    b.f_term = {"f", f, 1.0};
    b.sigma1 = expected_positive_part(law);
    b.sigma2 = (1.0 - b.p0) * p.c_plus * gy * (std::pow(m - 1.0, y) - std::pow(m, y)) -
               b.p0 * p.c_minus * gy * (std::pow(g + 1.0, y) - std::pow(g, y));
    return b;
}

TermList purejump_terms(const PureJumpBundle& b, Quantity q, int order) {
    const double y = b.params.y_index;
    TermList out;
    switch (q) {
        case Quantity::digital:
            out.push_back({"p0", b.p0, 0.0});
            for (const Term& d : b.d_terms) out.push_back(d);
            out.push_back(b.e_term);
            out.push_back(b.f_term);
            break;
        case Quantity::atm_vol:
            out.push_back({"sigma1", sqrt_2pi * b.sigma1, 1.0 / y - 0.5});
            out.push_back({"sigma2", sqrt_2pi * b.sigma2, 0.5});
            break;
        case Quantity::skew:
            out.push_back({"p0", sqrt_2pi * (0.5 - b.p0), -0.5});
            for (const Term& d : b.d_terms) out.push_back({d.label, -sqrt_2pi * d.coeff, d.exponent - 0.5});
            out.push_back({"e+sigma1/2", -sqrt_2pi * (b.e_term.coeff + 0.5 * b.sigma1), 1.0 / y - 0.5});
            out.push_back({"f+sigma2/2", -sqrt_2pi * (b.f_term.coeff + 0.5 * b.sigma2), 0.5});
            break;
        case Quantity::delta:
            out.push_back({"p0", b.p0, 0.0});
            for (const Term& d : b.d_terms) out.push_back(d);
            out.push_back({"sigma1+e", b.sigma1 + b.e_term.coeff, 1.0 / y});
            out.push_back({"sigma2+f", b.sigma2 + b.f_term.coeff, 1.0});
            break;
    }
    std::stable_sort(out.begin(), out.end(), [](const Term& a, const Term& c) { return a.exponent < c.exponent; });
    if (order >= 2) return out;
    const double shift = (q == Quantity::skew || q == Quantity::atm_vol) ? -0.5 : 0.0;
    TermList first;
    for (const Term& t : out)
        if (t.exponent <= 1.0 / y + shift + 1e-12) first.push_back(t);
    return first;
}

double eval_purejump(const PureJumpBundle& b, Quantity q, double t, int order) {
    if (!(t > 0.0)) throw DomainError("t must be positive");
    return eval_terms(purejump_terms(b, q, order), t);
}

ExpansionBundle to_expansion_bundle(const PureJumpBundle& b) {
    ExpansionBundle out;
    out.model = "purejump";
    for (Quantity q : {Quantity::digital, Quantity::atm_vol, Quantity::skew, Quantity::delta})
        out.terms[q] = purejump_terms(b, q, 2);
    out.meta = {{"C_plus", b.params.c_plus},
                {"C_minus", b.params.c_minus},
                {"G", b.params.g_minus},
                {"M", b.params.m_plus},
                {"Y", b.params.y_index},
                {"gamma_tilde", b.consts.gamma_tilde},
                {"eta", b.consts.eta},
                {"b_drift", b.consts.b_drift},
                {"p0", b.p0},
                {"sigma1", b.sigma1},
                {"sigma2", b.sigma2},
                {"e", b.e_term.coeff},
                {"f", b.f_term.coeff},
                {"n_order", static_cast<double>(b.n_order)}};
    return out;
}

}  // namespace tsskew
