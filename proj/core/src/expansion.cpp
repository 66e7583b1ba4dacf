#include "tsskew/expansion.hpp"

#include "tsskew/errors.hpp"
#include "tsskew/mixed.hpp"
#include "tsskew/params_io.hpp"
#include "tsskew/purejump.hpp"

namespace tsskew {

ExpansionBundle expansion_bundle(const McModel& m) {
    m.validate();
    if (m.kind == ModelKind::ts) return to_expansion_bundle(build_purejump(m.params));
    return to_expansion_bundle(build_mixed(m.params, stochvol_of(m)));
}

TermList expansion_terms(const McModel& m, Quantity q, int order) {
    m.validate();
    if (order != 1 && order != 2) throw DomainError("expansion order must be 1 or 2");
    if (m.kind == ModelKind::ts) return purejump_terms(build_purejump(m.params), q, order);
    return mixed_terms(build_mixed(m.params, stochvol_of(m)), q, order);
}

double eval_expansion(const McModel& m, Quantity q, double t, int order) {
    if (!(t > 0.0)) throw DomainError("t must be positive");
    return eval_terms(expansion_terms(m, q, order), t);
}

}  // namespace tsskew
