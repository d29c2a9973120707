#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "evsched/agents/assemble.hpp"
#include "evsched/eval/ira.hpp"
#include "evsched/rng.hpp"
#include "evsched/solvers/dispatch.hpp"

namespace evsched::eval {

// A request stripped to its scheduling content: a window and a target.
struct AbstractRequest {
    int start_slot = 0;
    int duration_slots = 1;
    double soc_target = 0.8;
};

// Uniform window sampling with a feasibility floor: the duration never drops
// below the slots needed to deliver E_req at full charger power, so every
// class instantiation stays solvable.
inline std::vector<AbstractRequest> sample_abstract_requests(int n, uint64_t seed,
                                                             const EnvironmentSnapshot& env,
                                                             const agents::DefaultsBook& defaults) {
    if (n < 1) throw Error("sample_abstract_requests: n must be >= 1");
    const double soc_target = defaults.soc_target();
    const double e_req = energy_requirement(std::max(soc_target, env.soc_init), env);
    const int horizon = env.grid.num_slots;
    int d_min = static_cast<int>(
        std::ceil(e_req / (env.bounds.x_max * env.grid.delta_t) - 1e-9));
    d_min = std::max(d_min, 1);
    if (d_min > horizon)
        throw Error("environment horizon cannot deliver the default energy requirement");

    Rng rng(seed);
    std::vector<AbstractRequest> out;
    out.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        AbstractRequest r;
        r.duration_slots = rng.uniform_int(d_min, horizon);
        r.start_slot = rng.uniform_int(0, horizon - r.duration_slots);
        r.soc_target = soc_target;
        out.push_back(r);
    }
    return out;
}

// Per-window view needed to evaluate any metric on any schedule.
struct WindowSlice {
    std::vector<double> prices;
    std::vector<double> load;
    double delta_t = 1.0;
    double e_req = 0.0;
    double damage_exponent = 3.0;
};

inline WindowSlice window_slice(const AbstractRequest& req, const EnvironmentSnapshot& env,
                                const agents::DefaultsBook& defaults) {
    WindowSlice w;
    w.delta_t = env.grid.delta_t;
    w.damage_exponent = defaults.grid_damage_exponent();
    w.e_req = energy_requirement(req.soc_target, env);
    for (int t = 0; t < req.duration_slots; ++t) {
        w.prices.push_back(env.prices[static_cast<size_t>(req.start_slot + t)]);
        w.load.push_back(env.non_flexible_load[static_cast<size_t>(req.start_slot + t)]);
    }
    return w;
}

// The cost functional of a metric evaluated on an arbitrary schedule, so
// schedules produced for the wrong class remain comparable on the right
// metric. Charging time counts the first slot index whose cumulative energy
// meets E_req; a schedule that never gets there scores one past the horizon.
inline double metric_cost(PerformanceMetric metric, const std::vector<double>& x,
                          const WindowSlice& w) {
    const size_t n = x.size();
    switch (metric) {
        case PerformanceMetric::CC: {
            double c = 0.0;
            for (size_t t = 0; t < n; ++t) c += w.prices[t] * x[t] * w.delta_t;
            return c;
        }
        case PerformanceMetric::CT: {
            double cum = 0.0;
            for (size_t t = 0; t < n; ++t) {
                cum += x[t] * w.delta_t;
                if (cum >= w.e_req - 1e-9) return static_cast<double>(t + 1);
            }
            return w.e_req <= 1e-9 ? 0.0 : static_cast<double>(n + 1);
        }
        case PerformanceMetric::PP: {
            double peak = 0.0;
            for (size_t t = 0; t < n; ++t) peak = std::max(peak, x[t] + w.load[t]);
            return peak;
        }
        case PerformanceMetric::PV: {
            double s = 0.0;
            for (size_t t = 0; t + 1 < n; ++t) s += (x[t + 1] - x[t]) * (x[t + 1] - x[t]);
            return s;
        }
        case PerformanceMetric::GD: {
            double s = 0.0;
            for (size_t t = 0; t < n; ++t) s += std::pow(x[t] + w.load[t], w.damage_exponent);
            return s;
        }
        case PerformanceMetric::EI: break;
    }
    throw Error("metric_cost: EI has no cost functional");
}

struct ArolResult {
    std::map<PerformanceMetric, double> arol;
    // mean relative loss per (true metric, wrong class) pair, before weighting
    std::map<PerformanceMetric, std::map<OpClass, double>> pair_mean_loss;
    // raw per-sample losses, kept for auditing the nonnegativity property
    std::map<PerformanceMetric, std::map<OpClass, std::vector<double>>> pair_losses;
    std::map<PerformanceMetric, int> degenerate_skips;
    std::map<PerformanceMetric, int> solver_failures;
};

// Monte-Carlo estimate of the relative optimality loss: for each sampled
// window, solve the true class and every misclassification target on the same
// window, evaluate the true metric on both schedules, and weight the averaged
// relative losses by the confusion probabilities. Samples whose true optimum
// is ~0 are skipped and counted (the relative loss is undefined there).
inline ArolResult compute_arol(const ConfusionMatrix& confusion,
                               const std::vector<AbstractRequest>& samples,
                               const EnvironmentSnapshot& env,
                               const agents::DefaultsBook& defaults) {
    ArolResult out;

    // Wrong classes actually reachable per metric under this confusion matrix.
    std::map<PerformanceMetric, std::vector<OpClass>> wrong;
    for (PerformanceMetric m : mapped_metrics()) {
        const OpClass truth = *metric_to_class(m);
        for (OpClass j : all_op_classes())
            if (j != truth && confusion.probability(m, j) > 0.0) wrong[m].push_back(j);
        out.arol[m] = 0.0;
    }

    bool any = false;
    for (const auto& [m, list] : wrong) any = any || !list.empty();
    if (!any) return out;  // identity confusion: every AROL is exactly zero

    struct SampleSolve {
        std::map<OpClass, std::optional<std::vector<double>>> schedule;
    };

    for (const AbstractRequest& sample : samples) {
        agents::RequestParameters req;
        req.time.start = env.grid.start.add_hours(sample.start_slot * env.grid.delta_t);
        req.time.duration_hours = sample.duration_slots * env.grid.delta_t;
        req.soc_target = sample.soc_target;
        const WindowSlice w = window_slice(sample, env, defaults);

        SampleSolve solved;
        auto schedule_for = [&](OpClass cls) -> const std::optional<std::vector<double>>& {
            auto it = solved.schedule.find(cls);
            if (it != solved.schedule.end()) return it->second;
            std::optional<std::vector<double>> values;
            try {
                const CompleteOp op = agents::assemble_op(cls, req, env, defaults);
                const solvers::SolveResult res = solvers::dispatch(op);
                if (res.status == solvers::SolveStatus::optimal ||
                    res.status == solvers::SolveStatus::max_iterations)
                    values = res.schedule.values;
            } catch (const Error&) {
            }
            return solved.schedule.emplace(cls, std::move(values)).first->second;
        };

        for (PerformanceMetric m : mapped_metrics()) {
            if (wrong[m].empty()) continue;
            const OpClass truth = *metric_to_class(m);
            const auto& xi = schedule_for(truth);
            if (!xi) {
                ++out.solver_failures[m];
                continue;
            }
            const double fi = metric_cost(m, *xi, w);
            if (std::abs(fi) <= 1e-9) {
                ++out.degenerate_skips[m];
                continue;
            }
            for (OpClass j : wrong[m]) {
                const auto& xj = schedule_for(j);
                if (!xj) {
                    ++out.solver_failures[m];
                    continue;
                }
                const double fj = metric_cost(m, *xj, w);
                out.pair_losses[m][j].push_back((fj - fi) / fi);
            }
        }
    }

    for (PerformanceMetric m : mapped_metrics()) {
        double total = 0.0;
        for (OpClass j : wrong[m]) {
            const auto& losses = out.pair_losses[m][j];
            if (losses.empty()) continue;
            double mean = 0.0;
            for (double l : losses) mean += l;
            mean /= static_cast<double>(losses.size());
            out.pair_mean_loss[m][j] = mean;
            total += confusion.probability(m, j) * mean;
        }
        out.arol[m] = total;
    }
    return out;
}

inline ArolResult compute_arol(const ConfusionMatrix& confusion, int n_samples, uint64_t seed,
                               const EnvironmentSnapshot& env,
                               const agents::DefaultsBook& defaults) {
    return compute_arol(confusion, sample_abstract_requests(n_samples, seed, env, defaults), env,
                        defaults);
}

inline nlohmann::json arol_result_json(const ArolResult& r) {
    nlohmann::json arol = nlohmann::json::object();
    for (const auto& [m, v] : r.arol) arol[to_string(m)] = v;
    nlohmann::json pairs = nlohmann::json::object();
    for (const auto& [m, row] : r.pair_mean_loss) {
        nlohmann::json jr = nlohmann::json::object();
        for (const auto& [c, v] : row) jr[to_string(c)] = v;
        pairs[to_string(m)] = jr;
    }
    nlohmann::json skips = nlohmann::json::object();
    for (const auto& [m, n] : r.degenerate_skips) skips[to_string(m)] = n;
    nlohmann::json fails = nlohmann::json::object();
    for (const auto& [m, n] : r.solver_failures) fails[to_string(m)] = n;
    return nlohmann::json{{"arol", arol},
                          {"pair_mean_loss", pairs},
                          {"degenerate_skips", skips},
                          {"solver_failures", fails}};
}

}  // namespace evsched::eval
