#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "evsched/core/types.hpp"

namespace evsched::solvers {

enum class SolveStatus { optimal, infeasible, max_iterations, unbounded };

inline std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::max_iterations: return "max_iterations";
        case SolveStatus::unbounded: return "unbounded";
    }
    return "?";
}

struct SolveResult {
    PowerSchedule schedule;
    double objective_value = 0.0;
    SolveStatus status = SolveStatus::infeasible;
    int iterations = 0;
    std::optional<int> tau;                                // minimum-time horizon
    std::optional<std::vector<Eigen::VectorXd>> trajectory;  // states over the active horizon
};

inline void to_json(nlohmann::json& j, const SolveResult& r) {
    j = nlohmann::json{{"status", to_string(r.status)},
                       {"objective", r.objective_value},
                       {"iterations", r.iterations},
                       {"schedule", r.schedule.values}};
    if (r.tau) j["tau"] = *r.tau;
    if (r.trajectory) {
        nlohmann::json traj = nlohmann::json::array();
        for (const auto& s : *r.trajectory) {
            if (s.size() == 1) {
                traj.push_back(s(0));
            } else {
                nlohmann::json row = nlohmann::json::array();
                for (Eigen::Index i = 0; i < s.size(); ++i) row.push_back(s(i));
                traj.push_back(row);
            }
        }
        j["trajectory"] = traj;
    }
}

}  // namespace evsched::solvers
