#pragma once

#include <optional>

#include "evsched/core/instances.hpp"
#include "evsched/solvers/projection.hpp"
#include "evsched/solvers/result.hpp"

namespace evsched::solvers {

// First-order method for the generic convex class. Equality constraints and
// the box are handled by exact projection; iterates follow a projected
// subgradient step with Armijo backtracking on the objective (the usual
// diminishing step kicks in whenever backtracking cannot make progress, which
// covers genuinely nonsmooth oracles). Nonlinear inequality oracles, when
// present, are treated with alternating feasibility steps on the most
// violated constraint; only the best feasible iterate is ever reported.
inline SolveResult solve_cp(const CpInstance& inst, const TimeGrid& grid,
                            const std::optional<Eigen::VectorXd>& init = std::nullopt) {
    const int n = grid.num_slots;
    const Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, inst.bounds.x_min);
    const Eigen::VectorXd hi = Eigen::VectorXd::Constant(n, inst.bounds.x_max);

    SolveResult out;
    out.schedule.grid = grid;
    out.schedule.values.assign(n, 0.0);

    auto project = [&](const Eigen::VectorXd& v) {
        return project_box_affine(v, inst.A_eq, inst.b_eq, lo, hi);
    };

    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
    if (init && init->size() == n) x0 = *init;
    auto start = project(x0);
    if (!start) {
        out.status = SolveStatus::infeasible;
        return out;
    }

    auto max_violation = [&](const Eigen::VectorXd& v, int& which) {
        which = -1;
        double worst = 0.0;
        for (size_t i = 0; i < inst.inequalities.size(); ++i) {
            const double gi = inst.inequalities[i].value(v);
            if (gi > worst) {
                worst = gi;
                which = static_cast<int>(i);
            }
        }
        return worst;
    };

    constexpr int kMaxIter = 50000;
    constexpr double kFeasTol = 1e-9;
    const double diam = std::max(inst.bounds.x_max - inst.bounds.x_min, 1e-6);

    Eigen::VectorXd x = *start;
    Eigen::VectorXd best = x;
    double best_obj = std::numeric_limits<double>::infinity();
    bool best_valid = false;
    int worst_idx = -1;
    if (max_violation(x, worst_idx) <= kFeasTol) {
        best_obj = inst.objective.value(x);
        best = x;
        best_valid = true;
    }

    double trial_step = 1.0;
    int it = 0;
    bool converged = false;
    for (; it < kMaxIter; ++it) {
        const double viol = max_violation(x, worst_idx);
        if (viol > kFeasTol) {
            // Feasibility step along the most violated inequality.
            const Eigen::VectorXd gsub = inst.inequalities[worst_idx].subgradient(x);
            const double norm = std::max(gsub.norm(), 1e-12);
            const double alpha = std::min(viol / (norm * norm), diam / norm);
            auto next = project(x - alpha * gsub);
            if (!next) break;
            x = *next;
            continue;
        }

        const double fx = inst.objective.value(x);
        if (best_valid && fx < best_obj) {
            best_obj = fx;
            best = x;
        } else if (!best_valid) {
            best_obj = fx;
            best = x;
            best_valid = true;
        }

        const Eigen::VectorXd g = inst.objective.subgradient(x);
        bool accepted = false;
        double t = std::min(trial_step * 2.0, 1e3);
        for (int bt = 0; bt < 40; ++bt) {
            auto cand = project(x - t * g);
            if (!cand) break;
            const Eigen::VectorXd d = *cand - x;
            const double fc = inst.objective.value(*cand);
            if (fc <= fx + g.dot(d) + 0.5 / t * d.squaredNorm() + 1e-15) {
                const double disp = d.cwiseAbs().maxCoeff();
                x = *cand;
                trial_step = t;
                accepted = true;
                if (disp / std::min(t, 1.0) <= 1e-7) converged = true;
                break;
            }
            t *= 0.5;
        }
        if (converged) break;
        if (!accepted) {
            // Nonsmooth fallback: diminishing step, normalized direction.
            const double norm = std::max(g.norm(), 1e-12);
            const double alpha = diam / (norm * std::sqrt(static_cast<double>(it + 1)));
            auto cand = project(x - alpha * g);
            if (!cand) break;
            if ((*cand - x).cwiseAbs().maxCoeff() < 1e-14) {
                converged = inst.inequalities.empty();
                break;
            }
            x = *cand;
        }
    }

    {
        int w;
        if (max_violation(x, w) <= kFeasTol) {
            const double fx = inst.objective.value(x);
            if (!best_valid || fx < best_obj) {
                best_obj = fx;
                best = x;
                best_valid = true;
            }
        }
    }
    const double final_viol = [&] {
        int w;
        return max_violation(best_valid ? best : x, w);
    }();

    out.iterations = it;
    if (!best_valid) {
        // Never reached the nonlinear-inequality region within the cap.
        out.status = SolveStatus::max_iterations;
        const Eigen::VectorXd& v = x;
        out.schedule.values.assign(v.data(), v.data() + n);
        out.objective_value = inst.objective.value(v);
        return out;
    }
    out.status = (converged && final_viol <= kFeasTol) ? SolveStatus::optimal
                                                       : SolveStatus::max_iterations;
    out.schedule.values.assign(best.data(), best.data() + n);
    out.objective_value = best_obj;
    return out;
}

}  // namespace evsched::solvers
