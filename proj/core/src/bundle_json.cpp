#include <json.hpp>

#include <cmath>

#include "tsskew/bundle.hpp"
#include "tsskew/errors.hpp"

namespace tsskew {

std::string to_string(Quantity q) {
    switch (q) {
        case Quantity::digital: return "digital";
        case Quantity::atm_vol: return "atm_vol";
        case Quantity::skew: return "skew";
        case Quantity::delta: return "delta";
    }
    return "digital";
}

Quantity quantity_from_string(const std::string& s) {
    if (s == "digital") return Quantity::digital;
    if (s == "atm_vol") return Quantity::atm_vol;
    if (s == "skew") return Quantity::skew;
    if (s == "delta") return Quantity::delta;
    throw DomainError("unknown quantity '" + s + "' (expected digital, atm_vol, skew or delta)");
}

double eval_terms(const TermList& terms, double t, double max_exponent) {
    if (!(t > 0.0)) throw DomainError("t must be positive");
    double total = 0.0;
    for (const Term& term : terms)
        if (term.exponent <= max_exponent + 1e-12) total += term.coeff * std::pow(t, term.exponent);
    return total;
}

std::string bundle_to_json(const ExpansionBundle& b, int indent) {
    using nlohmann::json;
    json exps = json::array(), coeffs = json::array();
    for (const auto& [q, terms] : b.terms) {
        json e = json::array(), c = json::array(), l = json::array();
        for (const Term& t : terms) {
            e.push_back(t.exponent);
            c.push_back(t.coeff);
            l.push_back(t.label);
        }
        exps.push_back({{"quantity", to_string(q)}, {"exponents", e}, {"labels", l}});
        coeffs.push_back({{"quantity", to_string(q)}, {"values", c}});
    }
    json meta = json::object();
    meta["model"] = b.model;
    for (const auto& [k, v] : b.meta) meta[k] = v;
    json out = {{"model", b.model}, {"quantity_exponents", exps}, {"coefficients", coeffs}, {"meta", meta}};
    return out.dump(indent);
}

ExpansionBundle bundle_from_json(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("bundle JSON: ") + e.what());
    }
    ExpansionBundle b;
    try {
        b.model = j.at("model").get<std::string>();
        std::map<std::string, const json*> values;
        for (const auto& c : j.at("coefficients")) values[c.at("quantity").get<std::string>()] = &c.at("values");
        for (const auto& e : j.at("quantity_exponents")) {
            const std::string name = e.at("quantity").get<std::string>();
            const auto& ex = e.at("exponents");
            const auto& lb = e.at("labels");
            const json& cv = *values.at(name);
            TermList terms;
            for (std::size_t i = 0; i < ex.size(); ++i)
                terms.push_back({lb.at(i).get<std::string>(), cv.at(i).get<double>(), ex.at(i).get<double>()});
            b.terms[quantity_from_string(name)] = terms;
        }
        for (const auto& [k, v] : j.at("meta").items())
            if (v.is_number()) b.meta[k] = v.get<double>();
    } catch (const json::exception& e) {
        throw SchemaError(std::string("bundle JSON: ") + e.what());
    } catch (const std::out_of_range&) {
        throw SchemaError("bundle JSON: coefficients and exponents do not match");
    }
    return b;
}

}  // namespace tsskew
