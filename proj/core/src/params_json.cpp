#include <json.hpp>

#include <fstream>
#include <sstream>

#include "tsskew/errors.hpp"
#include "tsskew/params_io.hpp"

namespace tsskew {

McModel model_from_json(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("model JSON: ") + e.what());
    }
    McModel m;
    try {
        m.kind = model_kind_from_string(j.value("model", std::string("ts")));
        m.params.c_plus = j.at("C_plus").get<double>();
        m.params.c_minus = j.at("C_minus").get<double>();
        m.params.g_minus = j.at("G").get<double>();
        m.params.m_plus = j.at("M").get<double>();
        m.params.y_index = j.at("Y").get<double>();
        if (m.kind == ModelKind::ts_bm) m.sigma = j.at("sigma").get<double>();
        if (m.kind == ModelKind::ts_heston) {
            const json& h = j.at("heston");
            m.heston.v0 = h.at("v0").get<double>();
            m.heston.kappa = h.at("kappa").get<double>();
            m.heston.theta = h.at("theta").get<double>();
            m.heston.xi_volvol = h.at("xi").get<double>();
            m.heston.rho = h.at("rho").get<double>();
        }
    } catch (const json::exception& e) {
        throw SchemaError(std::string("model JSON: ") + e.what());
    }
    m.validate();
    return m;
}

McModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

std::string model_to_json(const McModel& m, int indent) {
    nlohmann::ordered_json j;
    j["model"] = to_string(m.kind);
    j["C_plus"] = m.params.c_plus;
    j["C_minus"] = m.params.c_minus;
    j["G"] = m.params.g_minus;
    j["M"] = m.params.m_plus;
    j["Y"] = m.params.y_index;
    if (m.kind == ModelKind::ts_bm) j["sigma"] = m.sigma;
    if (m.kind == ModelKind::ts_heston)
        j["heston"] = {{"v0", m.heston.v0},
                       {"kappa", m.heston.kappa},
                       {"theta", m.heston.theta},
                       {"xi", m.heston.xi_volvol},
                       {"rho", m.heston.rho}};
    return j.dump(indent);
}

StochVolSpec stochvol_of(const McModel& m) {
    switch (m.kind) {
        case ModelKind::ts_bm: return constant_vol(m.sigma);
        case ModelKind::ts_heston: return heston_stochvol(m.heston);
        case ModelKind::ts: break;
    }
    throw DomainError("pure-jump model has no continuous component");
}

}  // namespace tsskew
