#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>

#include "evsched/agents/assemble.hpp"
#include "evsched/agents/classifier.hpp"
#include "evsched/solvers/dispatch.hpp"

namespace evsched::pipeline {

struct RunOptions {
    bool llm_initial_point = false;  // ask the backend for a solver start (QP/CP)
};

// Everything one request produced, kept for audit: the raw classifier
// response, the provenance-tagged op, the solve result and the constant-power
// baseline.
struct RunRecord {
    std::string request;
    agents::ClassificationResult classification;
    CompleteOp op;
    solvers::SolveResult result;
    PowerSchedule baseline;
    std::map<std::string, double> timings_ms;
};

// Constant-power reference policy: E_req spread uniformly over the window,
// clamped to the charger bounds.
inline PowerSchedule constant_baseline(const TimeGrid& grid, double e_req,
                                       const PowerBounds& bounds) {
    const double level = e_req / (grid.num_slots * grid.delta_t);
    PowerSchedule b;
    b.grid = grid;
    b.values.assign(static_cast<size_t>(grid.num_slots),
                    std::clamp(level, bounds.x_min, bounds.x_max));
    return b;
}

// Starting-point proposal for the iterative solvers. Strictly sanitized:
// values are clamped to the bounds and projected onto the equality set, and
// any malformed reply degrades to "no suggestion". Never affects the solution,
// only the path toward it.
inline std::optional<PowerSchedule> propose_initial_point(const CompleteOp& op,
                                                          const llm::BackendConfig& backend) {
    const Eigen::MatrixXd* a_eq = nullptr;
    const Eigen::VectorXd* b_eq = nullptr;
    const PowerBounds* bounds = nullptr;
    double e_req = 0.0;
    if (auto* p = std::get_if<QpInstance>(&op.instance)) {
        a_eq = &p->A_eq;
        b_eq = &p->b_eq;
        bounds = &p->bounds;
        if (p->b_eq.size() > 0) e_req = p->b_eq(0);
    } else if (auto* p = std::get_if<CpInstance>(&op.instance)) {
        a_eq = &p->A_eq;
        b_eq = &p->b_eq;
        bounds = &p->bounds;
        if (p->b_eq.size() > 0) e_req = p->b_eq(0);
    } else {
        return std::nullopt;  // exact solvers need no seed
    }

    const int n = op.grid.num_slots;
    try {
        nlohmann::json hint{{"num_slots", n},
                            {"delta_t", op.grid.delta_t},
                            {"energy_kwh", e_req}};
        llm::ToolSpec tool{
            "suggest_start",
            "Propose a starting power schedule (kW per slot) for an iterative solver.",
            nlohmann::json{{"type", "object"},
                           {"properties", {{"values", {{"type", "array"}}}}},
                           {"required", nlohmann::json::array({"values"})}}};
        const std::vector<llm::ChatMessage> messages{
            llm::system_message("You propose starting points for numerical solvers of EV "
                                "charging schedules. Reply with the suggest_start function."),
            llm::user_message("Suggest " + std::to_string(n) +
                              " per-slot charging powers for this problem: " + hint.dump())};
        const llm::ChatMessage reply = llm::chat(backend, messages, {tool});
        const llm::ToolCall call = llm::extract_tool_call(reply, tool);

        const auto& vals = call.arguments.at("values");
        if (!vals.is_array() || static_cast<int>(vals.size()) != n) return std::nullopt;
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) {
            if (!vals[i].is_number()) return std::nullopt;
            v(i) = std::clamp(vals[i].get<double>(), bounds->x_min, bounds->x_max);
        }
        const Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, bounds->x_min);
        const Eigen::VectorXd hi = Eigen::VectorXd::Constant(n, bounds->x_max);
        auto projected = solvers::project_box_affine(v, *a_eq, *b_eq, lo, hi);
        if (!projected) return std::nullopt;
        PowerSchedule s;
        s.grid = op.grid;
        s.values.assign(projected->data(), projected->data() + n);
        return s;
    } catch (const Error&) {
        return std::nullopt;  // degrade silently; the default start is always valid
    }
}

// The full chain: classify, identify parameters, solve. Stage failures are
// rethrown with a stage label so callers can tell where a request died.
inline RunRecord run(const std::string& request_text, const EnvironmentSnapshot& env,
                     const agents::ClassifierConfig& cfg, const agents::KnowledgeBase& kb,
                     const agents::DefaultsBook& defaults, const RunOptions& opts = {}) {
    using clock = std::chrono::steady_clock;
    auto ms_since = [](clock::time_point t0) {
        return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    };

    RunRecord rec;
    rec.request = request_text;
    const auto t_total = clock::now();

    auto stage = [&](const char* name, auto&& fn) {
        const auto t0 = clock::now();
        try {
            fn();
        } catch (const Error& e) {
            throw Error(std::string(name) + ": " + e.what());
        }
        rec.timings_ms[name] = ms_since(t0);
    };

    stage("classify", [&] { rec.classification = agents::classify(request_text, cfg, kb); });

    agents::RequestParameters req;
    stage("identify_parameters", [&] {
        req = agents::gather_request_parameters(request_text, env, cfg.backend, defaults);
    });

    stage("assemble", [&] {
        rec.op = agents::assemble_op(rec.classification.op_class, req, env, defaults);
    });

    stage("solve", [&] {
        std::optional<PowerSchedule> init;
        if (opts.llm_initial_point) init = propose_initial_point(rec.op, cfg.backend);
        rec.result = solvers::dispatch(rec.op, init);
    });

    const double soc_target = req.soc_target ? *req.soc_target : defaults.soc_target();
    rec.baseline = constant_baseline(rec.op.grid, energy_requirement(soc_target, env),
                                     PowerBounds{0.0, env.bounds.x_max});
    rec.timings_ms["total"] = ms_since(t_total);
    return rec;
}

inline nlohmann::json run_record_json(const RunRecord& rec) {
    nlohmann::json candidate_set = nlohmann::json::array();
    for (OpClass c : rec.classification.candidate_set) candidate_set.push_back(to_string(c));
    nlohmann::json result_json = rec.result;
    nlohmann::json raw{{"content", rec.classification.raw_response.content}};
    for (const auto& c : rec.classification.raw_response.tool_calls)
        raw["tool_calls"].push_back({{"name", c.name}, {"arguments", c.arguments}});
    return nlohmann::json{{"request", rec.request},
                          {"scenario", agents::to_string(rec.classification.scenario)},
                          {"candidate_set", candidate_set},
                          {"op_class", to_string(rec.classification.op_class)},
                          {"raw_response", raw},
                          {"op", rec.op},
                          {"status", to_string(rec.result.status)},
                          {"objective", rec.result.objective_value},
                          {"schedule", rec.result.schedule.values},
                          {"baseline", rec.baseline.values},
                          {"timings_ms", rec.timings_ms}};
}

}  // namespace evsched::pipeline
