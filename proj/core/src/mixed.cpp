#include "tsskew/mixed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tsskew/errors.hpp"
#include "tsskew/stable.hpp"

namespace tsskew {

namespace {
const double sqrt_2pi = std::sqrt(2.0 * std::numbers::pi);
}

int mixed_order(double y) {
    if (!(y > 1.0 && y < 2.0)) throw DomainError("Y must lie in (1,2)");
    int n = 1;
    while ((n + 1) * (1.0 - y / 2.0) <= (3.0 - y) / 2.0 + 1e-12) ++n;
    return n;
}

double xi_closed_form(double sigma0, double y) {
    return std::pow(sigma0, 1.0 - y) * std::pow(2.0, -(y + 1.0) / 2.0) * std::tgamma(1.0 - y / 2.0) /
           std::sqrt(std::numbers::pi);
}

MixedBundle build_mixed(const TemperedStableParams& p, const StochVolSpec& sv) {
    p.validate();
    sv.validate();
    MixedBundle b;
    b.params = p;
    b.consts = derive_constants(p);
    const double y = p.y_index;
    const double s0 = sv.spot_vol();
    const double mu0 = sv.mu0();
    const double a = p.c_plus + p.c_minus;
    const double gt = b.consts.gamma_tilde;
    b.spot_vol = s0;
    b.rho = sv.rho;
    b.vol_of_vol_term = sv.vol_of_vol_term();
    b.n_order = mixed_order(y);
    const auto d = generator_psi_coeffs(p, s0, b.n_order);
    for (int k = 1; k <= b.n_order; ++k)
        b.d_terms.push_back({"d" + std::to_string(k), d[k - 1], k * (1.0 - y / 2.0)});
    const double lev = b.rho * b.vol_of_vol_term;
    b.e_term = {"e", (gt + mu0 - 0.5 * lev) / (s0 * sqrt_2pi), 0.5};
    b.xi_const = xi_closed_form(s0, y);
    const double f = ((p.alpha_plus() * p.c_plus + p.alpha_minus() * p.c_minus) / (y - 1.0) -
                      a / (s0 * s0 * y) * (gt + mu0 - 0.5 * lev * (1.0 + y))) *
                     b.xi_const;
    b.f_term = {"f", f, (3.0 - y) / 2.0};
    b.sigma_bar1 = a * std::pow(2.0, -y / 2.0) * std::tgamma(1.0 - y / 2.0) * std::pow(s0, 1.0 - y) / (y * (y - 1.0));
    b.c_skew = gt - 0.5 * lev;
    return b;
}

TermList mixed_terms(const MixedBundle& b, Quantity q, int order) {
    const double y = b.params.y_index;
    TermList out;
    switch (q) {
        case Quantity::digital:
            out.push_back({"half", 0.5, 0.0});
            for (const Term& d : b.d_terms) out.push_back(d);
            out.push_back(b.e_term);
            out.push_back(b.f_term);
            break;
        case Quantity::atm_vol:
            out.push_back({"sigma0", b.spot_vol, 0.0});
            out.push_back({"sigma_bar1", b.sigma_bar1, (2.0 - y) / 2.0});
            break;
        case Quantity::skew:
            for (const Term& d : b.d_terms) out.push_back({d.label, -sqrt_2pi * d.coeff, d.exponent - 0.5});
            out.push_back({"c/sigma0", -b.c_skew / b.spot_vol, 0.0});
            out.push_back({"f+sigma_bar1/2", -(sqrt_2pi * b.f_term.coeff + 0.5 * b.sigma_bar1), 1.0 - y / 2.0});
            break;
        case Quantity::delta:
            out.push_back({"half", 0.5, 0.0});
            for (const Term& d : b.d_terms) out.push_back(d);
            out.push_back({"sigma0+e", b.spot_vol / sqrt_2pi + b.e_term.coeff, 0.5});
            out.push_back({"sigma_bar1+f", b.sigma_bar1 / sqrt_2pi + b.f_term.coeff, (3.0 - y) / 2.0});
            break;
    }
    std::stable_sort(out.begin(), out.end(), [](const Term& a, const Term& c) { return a.exponent < c.exponent; });
    if (order >= 2) return out;
    const double cut = (q == Quantity::skew || q == Quantity::atm_vol) ? 0.0 : 0.5;
    TermList first;
    for (const Term& t : out)
        if (t.exponent <= cut + 1e-12) first.push_back(t);
    return first;
}

double eval_mixed(const MixedBundle& b, Quantity q, double t, int order) {
    if (!(t > 0.0)) throw DomainError("t must be positive");
    return eval_terms(mixed_terms(b, q, order), t);
}

ExpansionBundle to_expansion_bundle(const MixedBundle& b) {
    ExpansionBundle out;
    out.model = "mixed";
    for (Quantity q : {Quantity::digital, Quantity::atm_vol, Quantity::skew, Quantity::delta})
        out.terms[q] = mixed_terms(b, q, 2);
    out.meta = {{"C_plus", b.params.c_plus},
                {"C_minus", b.params.c_minus},
                {"G", b.params.g_minus},
                {"M", b.params.m_plus},
                {"Y", b.params.y_index},
                {"gamma_tilde", b.consts.gamma_tilde},
                {"eta", b.consts.eta},
                {"spot_vol", b.spot_vol},
                {"rho", b.rho},
                {"vol_of_vol_term", b.vol_of_vol_term},
                {"sigma_bar1", b.sigma_bar1},
                {"c", b.c_skew},
                {"xi", b.xi_const},
                {"e", b.e_term.coeff},
                {"f", b.f_term.coeff},
                {"n_order", static_cast<double>(b.n_order)}};
    return out;
}

}  // namespace tsskew
