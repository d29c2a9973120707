#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "evsched/core/instances.hpp"
#include "evsched/core/types.hpp"
#include "evsched/errors.hpp"

namespace evsched {

inline nlohmann::json vec_to_json(const Eigen::VectorXd& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

inline Eigen::VectorXd vec_from_json(const nlohmann::json& a) {
    Eigen::VectorXd v(a.size());
    for (size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
    return v;
}

inline nlohmann::json mat_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec_to_json(m.row(i).transpose()));
    return rows;
}

// `cols` disambiguates an empty matrix (0 rows still carry a width).
inline Eigen::MatrixXd mat_from_json(const nlohmann::json& rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows.size(), rows.empty() ? cols : rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i)
        m.row(static_cast<Eigen::Index>(i)) = vec_from_json(rows[i]).transpose();
    return m;
}

inline void to_json(nlohmann::json& j, const TimeGrid& g) {
    j = {{"start", g.start.to_string()}, {"delta_t", g.delta_t}, {"num_slots", g.num_slots}};
}

inline void from_json(const nlohmann::json& j, TimeGrid& g) {
    g.start = Timestamp::parse(j.at("start").get<std::string>());
    g.delta_t = j.at("delta_t").get<double>();
    g.num_slots = j.at("num_slots").get<int>();
}

inline void to_json(nlohmann::json& j, const PowerBounds& b) {
    j = {{"x_min", b.x_min}, {"x_max", b.x_max}};
}

inline void from_json(const nlohmann::json& j, PowerBounds& b) {
    b.x_min = j.at("x_min").get<double>();
    b.x_max = j.at("x_max").get<double>();
}

inline void to_json(nlohmann::json& j, const PowerSchedule& s) {
    j = {{"grid", s.grid}, {"values", s.values}};
}

inline void from_json(const nlohmann::json& j, PowerSchedule& s) {
    s.grid = j.at("grid").get<TimeGrid>();
    s.values = j.at("values").get<std::vector<double>>();
}

// Rebuilds the value/subgradient pair of a parametric convex objective.
// Supported form: {"kind": "shifted_power_sum", "offsets": [...], "exponent": p}
// meaning f(x) = sum_t (x_t + offsets_t)^p.
inline ConvexOracle build_convex_oracle(const nlohmann::json& form) {
    const std::string kind = form.at("kind").get<std::string>();
    if (kind == "shifted_power_sum") {
        const Eigen::VectorXd off = vec_from_json(form.at("offsets"));
        const double p = form.at("exponent").get<double>();
        ConvexOracle o;
        o.value = [off, p](const Eigen::VectorXd& x) {
            double s = 0;
            for (Eigen::Index t = 0; t < x.size(); ++t) s += std::pow(x(t) + off(t), p);
            return s;
        };
        o.subgradient = [off, p](const Eigen::VectorXd& x) {
            Eigen::VectorXd g(x.size());
            for (Eigen::Index t = 0; t < x.size(); ++t) g(t) = p * std::pow(x(t) + off(t), p - 1);
            return g;
        };
        return o;
    }
    throw Error("unknown convex objective form: " + kind);
}

inline void to_json(nlohmann::json& j, const LpInstance& p) {
    j = {{"c", vec_to_json(p.c)},       {"A", mat_to_json(p.A)},
         {"b", vec_to_json(p.b)},       {"A_eq", mat_to_json(p.A_eq)},
         {"b_eq", vec_to_json(p.b_eq)}, {"bounds", p.bounds}};
}

inline void from_json(const nlohmann::json& j, LpInstance& p) {
    p.c = vec_from_json(j.at("c"));
    p.A = mat_from_json(j.at("A"), p.c.size());
    p.b = vec_from_json(j.at("b"));
    p.A_eq = mat_from_json(j.at("A_eq"), p.c.size());
    p.b_eq = vec_from_json(j.at("b_eq"));
    p.bounds = j.at("bounds").get<PowerBounds>();
}

inline void to_json(nlohmann::json& j, const QpInstance& p) {
    j = {{"Q", mat_to_json(p.Q)},       {"c", vec_to_json(p.c)},
         {"A", mat_to_json(p.A)},       {"b", vec_to_json(p.b)},
         {"A_eq", mat_to_json(p.A_eq)}, {"b_eq", vec_to_json(p.b_eq)},
         {"bounds", p.bounds}};
}

inline void from_json(const nlohmann::json& j, QpInstance& p) {
    p.c = vec_from_json(j.at("c"));
    p.Q = mat_from_json(j.at("Q"), p.c.size());
    p.A = mat_from_json(j.at("A"), p.c.size());
    p.b = vec_from_json(j.at("b"));
    p.A_eq = mat_from_json(j.at("A_eq"), p.c.size());
    p.b_eq = vec_from_json(j.at("b_eq"));
    p.bounds = j.at("bounds").get<PowerBounds>();
}

inline void to_json(nlohmann::json& j, const MmInstance& p) {
    j = {{"F", mat_to_json(p.F)},       {"g", vec_to_json(p.g)},
         {"A", mat_to_json(p.A)},       {"b", vec_to_json(p.b)},
         {"A_eq", mat_to_json(p.A_eq)}, {"b_eq", vec_to_json(p.b_eq)},
         {"bounds", p.bounds}};
}

inline void from_json(const nlohmann::json& j, MmInstance& p) {
    p.F = mat_from_json(j.at("F"), 0);
    p.g = vec_from_json(j.at("g"));
    p.A = mat_from_json(j.at("A"), p.F.cols());
    p.b = vec_from_json(j.at("b"));
    p.A_eq = mat_from_json(j.at("A_eq"), p.F.cols());
    p.b_eq = vec_from_json(j.at("b_eq"));
    p.bounds = j.at("bounds").get<PowerBounds>();
}

inline void to_json(nlohmann::json& j, const CpInstance& p) {
    if (p.form.is_null() || p.form.empty())
        throw Error("CP instance built from custom oracles is not serializable");
    j = {{"form", p.form},
         {"A_eq", mat_to_json(p.A_eq)},
         {"b_eq", vec_to_json(p.b_eq)},
         {"bounds", p.bounds}};
}

inline void from_json(const nlohmann::json& j, CpInstance& p) {
    p.form = j.at("form");
    p.objective = build_convex_oracle(p.form);
    p.inequalities.clear();
    p.b_eq = vec_from_json(j.at("b_eq"));
    p.A_eq = mat_from_json(j.at("A_eq"), 0);
    p.bounds = j.at("bounds").get<PowerBounds>();
}

inline void to_json(nlohmann::json& j, const LmtInstance& p) {
    j = {{"A_dyn", mat_to_json(p.A_dyn)},
         {"B_dyn", mat_to_json(p.B_dyn)},
         {"s_init", vec_to_json(p.s_init)},
         {"s_final", vec_to_json(p.s_final)},
         {"s_min", vec_to_json(p.s_min)},
         {"s_max", vec_to_json(p.s_max)},
         {"bounds", p.bounds},
         {"max_horizon", p.max_horizon},
         {"mode", p.mode == TerminalMode::exact ? "exact" : "at_least"}};
}

inline void from_json(const nlohmann::json& j, LmtInstance& p) {
    p.A_dyn = mat_from_json(j.at("A_dyn"), 0);
    p.B_dyn = mat_from_json(j.at("B_dyn"), 1);
    p.s_init = vec_from_json(j.at("s_init"));
    p.s_final = vec_from_json(j.at("s_final"));
    p.s_min = vec_from_json(j.at("s_min"));
    p.s_max = vec_from_json(j.at("s_max"));
    p.bounds = j.at("bounds").get<PowerBounds>();
    p.max_horizon = j.at("max_horizon").get<int>();
    p.mode = j.at("mode").get<std::string>() == "exact" ? TerminalMode::exact
                                                        : TerminalMode::at_least;
}

inline void to_json(nlohmann::json& j, const LqrInstance& p) {
    j = {{"A_dyn", mat_to_json(p.A_dyn)},
         {"B_dyn", mat_to_json(p.B_dyn)},
         {"Q_state", mat_to_json(p.Q_state)},
         {"Q_final", mat_to_json(p.Q_final)},
         {"r", p.r},
         {"horizon", p.horizon},
         {"s0", vec_to_json(p.s0)},
         {"bounds", p.bounds}};
}

inline void from_json(const nlohmann::json& j, LqrInstance& p) {
    p.A_dyn = mat_from_json(j.at("A_dyn"), 0);
    p.B_dyn = mat_from_json(j.at("B_dyn"), 1);
    p.Q_state = mat_from_json(j.at("Q_state"), 0);
    p.Q_final = mat_from_json(j.at("Q_final"), 0);
    p.r = j.at("r").get<double>();
    p.horizon = j.at("horizon").get<int>();
    p.s0 = vec_from_json(j.at("s0"));
    p.bounds = j.at("bounds").get<PowerBounds>();
}

inline void to_json(nlohmann::json& j, const CompleteOp& op) {
    nlohmann::json inst;
    std::visit([&inst](const auto& p) { inst = p; }, op.instance);
    nlohmann::json prov = nlohmann::json::object();
    for (const auto& [k, v] : op.provenance) prov[k] = to_string(v);
    j = {{"op_class", to_string(op.op_class)},
         {"grid", op.grid},
         {"instance", inst},
         {"provenance", prov}};
}

inline void from_json(const nlohmann::json& j, CompleteOp& op) {
    const auto cls = parse_op_class(j.at("op_class").get<std::string>());
    if (!cls) throw Error("unknown op_class in serialized op");
    op.op_class = *cls;
    op.grid = j.at("grid").get<TimeGrid>();
    const auto& inst = j.at("instance");
    switch (*cls) {
        case OpClass::LP: op.instance = inst.get<LpInstance>(); break;
        case OpClass::QP: op.instance = inst.get<QpInstance>(); break;
        case OpClass::MM: op.instance = inst.get<MmInstance>(); break;
        case OpClass::CP: op.instance = inst.get<CpInstance>(); break;
        case OpClass::LMT: op.instance = inst.get<LmtInstance>(); break;
        case OpClass::LQR: op.instance = inst.get<LqrInstance>(); break;
    }
    op.provenance.clear();
    for (const auto& [k, v] : j.at("provenance").items()) {
        const auto p = parse_provenance(v.get<std::string>());
        if (!p) throw Error("unknown provenance tag: " + v.get<std::string>());
        op.provenance[k] = *p;
    }
}

}  // namespace evsched
