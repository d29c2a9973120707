#pragma once

#include <limits>

#include "evsched/core/instances.hpp"
#include "evsched/solvers/result.hpp"
#include "evsched/solvers/simplex.hpp"

namespace evsched::solvers {

// Epigraph reformulation: add a level variable z with F_i x + g_i <= z and
// minimize z. Exact for affine components; the reported objective is the
// recomputed max_i(F_i x* + g_i), not the raw level variable.
inline SolveResult solve_mm(const MmInstance& inst, const TimeGrid& grid) {
    const int n = static_cast<int>(inst.F.cols());
    const int k = static_cast<int>(inst.F.rows());
    if (n != grid.num_slots) throw DimensionMismatch("MM: F width does not match grid");

    // Safe finite bounds for the level variable over the box.
    double z_lo = std::numeric_limits<double>::infinity();
    double z_hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
        double fmin = inst.g(i), fmax = inst.g(i);
        for (int j = 0; j < n; ++j) {
            const double a = inst.F(i, j);
            fmin += a * (a > 0 ? inst.bounds.x_min : inst.bounds.x_max);
            fmax += a * (a > 0 ? inst.bounds.x_max : inst.bounds.x_min);
        }
        z_lo = std::min(z_lo, fmin);
        z_hi = std::max(z_hi, fmax);
    }

    const int m1 = static_cast<int>(inst.A.rows());
    LpProblem p;
    p.c = Eigen::VectorXd::Zero(n + 1);
    p.c(n) = 1.0;
    p.A_ub = Eigen::MatrixXd::Zero(k + m1, n + 1);
    p.b_ub = Eigen::VectorXd::Zero(k + m1);
    p.A_ub.topLeftCorner(k, n) = inst.F;
    p.A_ub.col(n).head(k).setConstant(-1.0);
    p.b_ub.head(k) = -inst.g;
    if (m1 > 0) {
        p.A_ub.bottomLeftCorner(m1, n) = inst.A;
        p.b_ub.tail(m1) = inst.b;
    }
    p.A_eq = Eigen::MatrixXd::Zero(inst.A_eq.rows(), n + 1);
    if (inst.A_eq.rows() > 0) p.A_eq.leftCols(n) = inst.A_eq;
    p.b_eq = inst.b_eq;
    p.lower = Eigen::VectorXd::Constant(n + 1, inst.bounds.x_min);
    p.upper = Eigen::VectorXd::Constant(n + 1, inst.bounds.x_max);
    p.lower(n) = z_lo - 1.0;
    p.upper(n) = z_hi + 1.0;

    const LpSolution sol = solve_lp_problem(p);

    SolveResult out;
    out.schedule.grid = grid;
    out.iterations = sol.iterations;
    if (sol.status != LpStatus::optimal) {
        out.status = sol.status == LpStatus::infeasible ? SolveStatus::infeasible
                                                        : SolveStatus::unbounded;
        out.schedule.values.assign(n, 0.0);
        return out;
    }
    out.status = SolveStatus::optimal;
    const Eigen::VectorXd x = sol.x.head(n);
    out.schedule.values.assign(x.data(), x.data() + n);
    out.objective_value = (inst.F * x + inst.g).maxCoeff();
    return out;
}

}  // namespace evsched::solvers
