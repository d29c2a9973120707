#pragma once

#include <vector>

#include "evsched/core/instances.hpp"
#include "evsched/solvers/result.hpp"

namespace evsched::solvers {

// Finite-horizon Riccati backward recursion, then a forward rollout that
// saturates the feedback law at the input box: x_t = clamp(-K_t s_t). The
// clamping is a post-hoc approximation of the box-constrained problem; the
// reported objective is the realized cost of the clamped trajectory.
inline SolveResult solve_lqr(const LqrInstance& inst, const TimeGrid& grid) {
    const int N = inst.horizon;
    const int ns = static_cast<int>(inst.s0.size());
    if (N > grid.num_slots) throw DimensionMismatch("LQR: horizon exceeds grid");

    auto check_sym = [](const Eigen::MatrixXd& M, const char* what) {
        if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-6)
            throw NumericalFailure(std::string("LQR: ") + what + " lost symmetry beyond 1e-6");
    };
    check_sym(inst.Q_state, "Q");
    check_sym(inst.Q_final, "Q_f");
    if (!(inst.r > 0)) throw NumericalFailure("LQR: input weight r must be positive");

    // Backward pass.
    std::vector<Eigen::RowVectorXd> K(N);
    Eigen::MatrixXd P = inst.Q_final;
    for (int t = N - 1; t >= 0; --t) {
        const Eigen::MatrixXd BtP = inst.B_dyn.transpose() * P;          // 1 x ns
        const double denom = inst.r + (BtP * inst.B_dyn)(0, 0);
        K[t] = (BtP * inst.A_dyn) / denom;                               // 1 x ns
        P = inst.Q_state + inst.A_dyn.transpose() * P * inst.A_dyn -
            inst.A_dyn.transpose() * BtP.transpose() * K[t];
        P = 0.5 * (P + P.transpose().eval());
        check_sym(P, "Riccati iterate");
    }

    // Forward rollout with saturation.
    SolveResult out;
    out.schedule.grid = grid;
    out.schedule.values.assign(grid.num_slots, 0.0);
    std::vector<Eigen::VectorXd> traj;
    traj.reserve(N + 1);
    traj.push_back(inst.s0);
    double cost = 0.0;
    Eigen::VectorXd s = inst.s0;
    for (int t = 0; t < N; ++t) {
        double u = -(K[t] * s)(0);
        u = std::clamp(u, inst.bounds.x_min, inst.bounds.x_max);
        cost += (s.transpose() * inst.Q_state * s)(0) + inst.r * u * u;
        out.schedule.values[t] = u;
        s = inst.A_dyn * s + inst.B_dyn.col(0) * u;
        traj.push_back(s);
    }
    cost += (s.transpose() * inst.Q_final * s)(0);

    out.status = SolveStatus::optimal;
    out.objective_value = cost;
    out.iterations = N;
    out.trajectory = std::move(traj);
    (void)ns;
    return out;
}

}  // namespace evsched::solvers
