#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "evsched/core/instances.hpp"
#include "evsched/core/types.hpp"

namespace evsched {

struct Violation {
    std::string constraint;  // e.g. "bound_upper[3]", "ineq[0]", "state_box[2]"
    double amount = 0.0;     // how far beyond the constraint the point lies
};

struct FeasibilityReport {
    std::vector<Violation> violations;
    bool feasible() const { return violations.empty(); }
};

namespace detail {

inline void check_bounds(const std::vector<double>& v, const PowerBounds& b, double tol,
                         FeasibilityReport& rep) {
    for (size_t t = 0; t < v.size(); ++t) {
        if (v[t] < b.x_min - tol)
            rep.violations.push_back({"bound_lower[" + std::to_string(t) + "]", b.x_min - v[t]});
        if (v[t] > b.x_max + tol)
            rep.violations.push_back({"bound_upper[" + std::to_string(t) + "]", v[t] - b.x_max});
    }
}

inline void check_linear(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                         const Eigen::VectorXd& x, bool equality, double tol,
                         const std::string& label, FeasibilityReport& rep) {
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        const double r = A.row(i).dot(x) - b(i);
        const double excess = equality ? std::abs(r) : r;
        if (excess > tol)
            rep.violations.push_back({label + "[" + std::to_string(i) + "]", excess});
    }
}

// Simulate s_{t+1} = A s_t + B x_t.
inline std::vector<Eigen::VectorXd> simulate_states(const Eigen::MatrixXd& A,
                                                    const Eigen::MatrixXd& B,
                                                    const Eigen::VectorXd& s0,
                                                    const std::vector<double>& x, int steps) {
    std::vector<Eigen::VectorXd> traj;
    traj.reserve(steps + 1);
    traj.push_back(s0);
    for (int t = 0; t < steps; ++t)
        traj.push_back(A * traj.back() + B * Eigen::VectorXd::Constant(1, x[t]));
    return traj;
}

inline bool terminal_met(const LmtInstance& inst, const Eigen::VectorXd& s, double tol) {
    if (inst.mode == TerminalMode::at_least)
        return (s - inst.s_final).minCoeff() >= -tol;
    return (s - inst.s_final).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace detail

// Reports every constraint of `op` violated by more than `tol`.
//
// LMT schedules are judged on their active horizon: the trajectory must stay
// inside the state box up to the first step where the terminal condition is
// met; the zero padding after that step is not part of the problem.
inline FeasibilityReport validate_schedule(const PowerSchedule& x, const CompleteOp& op,
                                           double tol = 1e-6) {
    if (!(x.grid == op.grid)) throw DimensionMismatch("schedule grid differs from op grid");
    if (static_cast<int>(x.values.size()) != op.grid.num_slots)
        throw DimensionMismatch("schedule length does not match grid");

    FeasibilityReport rep;
    const Eigen::VectorXd xv =
        Eigen::Map<const Eigen::VectorXd>(x.values.data(), static_cast<Eigen::Index>(x.values.size()));

    if (auto* p = std::get_if<LpInstance>(&op.instance)) {
        detail::check_bounds(x.values, p->bounds, tol, rep);
        detail::check_linear(p->A, p->b, xv, false, tol, "ineq", rep);
        detail::check_linear(p->A_eq, p->b_eq, xv, true, tol, "eq", rep);
    } else if (auto* p = std::get_if<QpInstance>(&op.instance)) {
        detail::check_bounds(x.values, p->bounds, tol, rep);
        detail::check_linear(p->A, p->b, xv, false, tol, "ineq", rep);
        detail::check_linear(p->A_eq, p->b_eq, xv, true, tol, "eq", rep);
    } else if (auto* p = std::get_if<MmInstance>(&op.instance)) {
        detail::check_bounds(x.values, p->bounds, tol, rep);
        detail::check_linear(p->A, p->b, xv, false, tol, "ineq", rep);
        detail::check_linear(p->A_eq, p->b_eq, xv, true, tol, "eq", rep);
    } else if (auto* p = std::get_if<CpInstance>(&op.instance)) {
        detail::check_bounds(x.values, p->bounds, tol, rep);
        detail::check_linear(p->A_eq, p->b_eq, xv, true, tol, "eq", rep);
        for (size_t i = 0; i < p->inequalities.size(); ++i) {
            const double gi = p->inequalities[i].value(xv);
            if (gi > tol) rep.violations.push_back({"g[" + std::to_string(i) + "]", gi});
        }
    } else if (auto* p = std::get_if<LmtInstance>(&op.instance)) {
        detail::check_bounds(x.values, p->bounds, tol, rep);
        auto traj = detail::simulate_states(p->A_dyn, p->B_dyn, p->s_init, x.values,
                                            op.grid.num_slots);
        bool reached = false;
        for (size_t k = 0; k < traj.size(); ++k) {
            // State box applies up to (and including) the step that meets the
            // terminal condition; the zero padding afterwards does not.
            const double below = (p->s_min - traj[k]).maxCoeff();
            const double above = (traj[k] - p->s_max).maxCoeff();
            if (below > tol)
                rep.violations.push_back({"state_box[" + std::to_string(k) + "]", below});
            if (above > tol)
                rep.violations.push_back({"state_box[" + std::to_string(k) + "]", above});
            if (detail::terminal_met(*p, traj[k], tol)) {
                reached = true;
                break;
            }
        }
        if (!reached) {
            const Eigen::VectorXd& last = traj.back();
            const double gap = p->mode == TerminalMode::at_least
                                   ? (p->s_final - last).maxCoeff()
                                   : (last - p->s_final).cwiseAbs().maxCoeff();
            rep.violations.push_back({"terminal", gap});
        }
    } else if (auto* p = std::get_if<LqrInstance>(&op.instance)) {
        detail::check_bounds(x.values, p->bounds, tol, rep);
    }
    return rep;
}

}  // namespace evsched
