#pragma once

#include <map>
#include <string>
#include <vector>

namespace tsskew {

enum class Quantity { digital, atm_vol, skew, delta };

std::string to_string(Quantity q);
Quantity quantity_from_string(const std::string& s);

struct Term {
    std::string label;
    double coeff = 0.0;
    double exponent = 0.0;
};

using TermList = std::vector<Term>;

// Sum of coeff * t^exponent over the terms whose exponent does not exceed max_exponent.
double eval_terms(const TermList& terms, double t, double max_exponent = 1e300);

// Serializable view of an expansion: term lists per quantity plus scalar metadata.
struct ExpansionBundle {
    std::string model;
    std::map<Quantity, TermList> terms;
    std::map<std::string, double> meta;
};

std::string bundle_to_json(const ExpansionBundle& b, int indent = 2);
ExpansionBundle bundle_from_json(const std::string& text);

}  // namespace tsskew
