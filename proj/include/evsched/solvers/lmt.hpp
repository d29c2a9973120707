#pragma once

#include <vector>

#include "evsched/core/instances.hpp"
#include "evsched/solvers/result.hpp"
#include "evsched/solvers/simplex.hpp"

namespace evsched::solvers {

namespace detail {

// LP feasibility subproblem for a fixed horizon tau: states are eliminated,
// s_k = A^k s0 + sum_{j<k} A^{k-1-j} B x_j, leaving box/terminal rows over the
// inputs alone. Phase 2 minimizes sum_t (t+1) x_t so the returned schedule is
// the earliest-fill (bang-bang) representative among feasible ones.
inline std::optional<Eigen::VectorXd> lmt_feasible_at(const LmtInstance& inst, int tau,
                                                      int* iterations) {
    const int ns = static_cast<int>(inst.s_init.size());
    if (tau == 0) {
        const bool ok = inst.mode == TerminalMode::at_least
                            ? (inst.s_init - inst.s_final).minCoeff() >= -1e-9
                            : (inst.s_init - inst.s_final).cwiseAbs().maxCoeff() <= 1e-9;
        return ok ? std::optional<Eigen::VectorXd>(Eigen::VectorXd::Zero(0)) : std::nullopt;
    }

    // coef[k] is the ns x tau map from inputs to s_k.
    std::vector<Eigen::MatrixXd> coef(tau + 1, Eigen::MatrixXd::Zero(ns, tau));
    std::vector<Eigen::VectorXd> drift(tau + 1);
    drift[0] = inst.s_init;
    for (int k = 1; k <= tau; ++k) {
        coef[k] = inst.A_dyn * coef[k - 1];
        coef[k].col(k - 1) += inst.B_dyn.col(0);
        drift[k] = inst.A_dyn * drift[k - 1];
    }

    const int n_term_eq = inst.mode == TerminalMode::exact ? ns : 0;
    const int n_term_ub = inst.mode == TerminalMode::at_least ? ns : 0;
    const int m_ub = 2 * ns * tau + n_term_ub;

    LpProblem p;
    p.c = Eigen::VectorXd::Zero(tau);
    for (int t = 0; t < tau; ++t) p.c(t) = static_cast<double>(t + 1);
    p.A_ub = Eigen::MatrixXd::Zero(m_ub, tau);
    p.b_ub = Eigen::VectorXd::Zero(m_ub);
    int row = 0;
    for (int k = 1; k <= tau; ++k) {
        for (int d = 0; d < ns; ++d) {
            p.A_ub.row(row) = coef[k].row(d);
            p.b_ub(row) = inst.s_max(d) - drift[k](d);
            ++row;
            p.A_ub.row(row) = -coef[k].row(d);
            p.b_ub(row) = drift[k](d) - inst.s_min(d);
            ++row;
        }
    }
    if (n_term_ub > 0) {
        for (int d = 0; d < ns; ++d) {
            p.A_ub.row(row) = -coef[tau].row(d);
            p.b_ub(row) = drift[tau](d) - inst.s_final(d);
            ++row;
        }
    }
    p.A_eq = Eigen::MatrixXd::Zero(n_term_eq, tau);
    p.b_eq = Eigen::VectorXd::Zero(n_term_eq);
    if (n_term_eq > 0) {
        p.A_eq = coef[tau];
        p.b_eq = inst.s_final - drift[tau];
    }
    p.lower = Eigen::VectorXd::Constant(tau, inst.bounds.x_min);
    p.upper = Eigen::VectorXd::Constant(tau, inst.bounds.x_max);

    const LpSolution sol = solve_lp_problem(p);
    if (iterations) *iterations += sol.iterations;
    if (sol.status != LpStatus::optimal) return std::nullopt;
    return sol.x;
}

}  // namespace detail

// Minimal-horizon search: scan tau upward and solve the LP feasibility
// subproblem at each candidate, which is exact for the single integer degree
// of freedom. The schedule is zero-padded past tau to fill the grid.
inline SolveResult solve_lmt(const LmtInstance& inst, const TimeGrid& grid) {
    SolveResult out;
    out.schedule.grid = grid;
    out.schedule.values.assign(grid.num_slots, 0.0);
    const int cap = std::min(inst.max_horizon, grid.num_slots);

    for (int tau = 0; tau <= cap; ++tau) {
        auto x = detail::lmt_feasible_at(inst, tau, &out.iterations);
        if (!x) continue;
        out.status = SolveStatus::optimal;
        out.tau = tau;
        out.objective_value = static_cast<double>(tau);
        for (int t = 0; t < tau; ++t) out.schedule.values[t] = (*x)(t);
        std::vector<Eigen::VectorXd> traj;
        traj.push_back(inst.s_init);
        for (int t = 0; t < tau; ++t)
            traj.push_back(inst.A_dyn * traj.back() + inst.B_dyn.col(0) * (*x)(t));
        out.trajectory = std::move(traj);
        return out;
    }
    out.status = SolveStatus::infeasible;
    return out;
}

}  // namespace evsched::solvers
