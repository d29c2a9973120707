#pragma once

#include <optional>

#include "evsched/core/instances.hpp"
#include "evsched/solvers/projection.hpp"
#include "evsched/solvers/result.hpp"

namespace evsched::solvers {

// Projected gradient with a fixed 1/L step, L the largest eigenvalue of Q.
// Inequality rows are turned into bounded slacks so the feasible set becomes
// box-intersect-affine, for which exact projections are available. Declared
// optimal once the projected-gradient residual ||x - P(x - grad)||_inf drops
// below 1e-8; otherwise the best iterate is returned with max_iterations.
inline SolveResult solve_qp(const QpInstance& inst, const TimeGrid& grid,
                            const std::optional<Eigen::VectorXd>& init = std::nullopt) {
    const int n = static_cast<int>(inst.Q.rows());
    if (n != grid.num_slots) throw DimensionMismatch("QP: Q size does not match grid");
    const int m1 = static_cast<int>(inst.A.rows());
    const int me = static_cast<int>(inst.A_eq.rows());
    const int N = n + m1;

    Eigen::VectorXd lo = Eigen::VectorXd::Constant(N, 0.0);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(N, 0.0);
    lo.head(n).setConstant(inst.bounds.x_min);
    hi.head(n).setConstant(inst.bounds.x_max);
    for (int i = 0; i < m1; ++i) {
        double amin = 0.0;
        for (int j = 0; j < n; ++j) {
            const double a = inst.A(i, j);
            amin += a * (a > 0 ? inst.bounds.x_min : inst.bounds.x_max);
        }
        lo(n + i) = 0.0;
        hi(n + i) = std::max(0.0, inst.b(i) - amin);  // largest slack over the box
    }

    Eigen::MatrixXd E(me + m1, N);
    Eigen::VectorXd f(me + m1);
    E.setZero();
    if (me > 0) {
        E.topLeftCorner(me, n) = inst.A_eq;
        f.head(me) = inst.b_eq;
    }
    if (m1 > 0) {
        E.bottomLeftCorner(m1, n) = inst.A;
        E.bottomRightCorner(m1, m1).setIdentity();
        f.tail(m1) = inst.b;
    }

    SolveResult out;
    out.schedule.grid = grid;
    out.schedule.values.assign(n, 0.0);

    auto project = [&](const Eigen::VectorXd& v) { return project_box_affine(v, E, f, lo, hi); };

    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(N);
    if (init && init->size() == n) {
        x0.head(n) = *init;
        if (m1 > 0) x0.tail(m1) = inst.b - inst.A * init->head(n);
    }
    auto start = project(x0);
    if (!start) {
        out.status = SolveStatus::infeasible;
        return out;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(inst.Q);
    const double L = std::max(es.eigenvalues().maxCoeff(), 1e-12);
    const double step = 1.0 / L;

    auto grad = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(N);
        g.head(n) = inst.Q * v.head(n) + inst.c;
        return g;
    };
    auto objective = [&](const Eigen::VectorXd& v) {
        const Eigen::VectorXd xs = v.head(n);
        return 0.5 * xs.dot(inst.Q * xs) + inst.c.dot(xs);
    };

    Eigen::VectorXd x = *start;
    Eigen::VectorXd best = x;
    double best_obj = objective(x);
    constexpr int kMaxIter = 100000;
    int it = 0;
    bool converged = false;
    // ||x - P(x - t g)|| / t is nonincreasing in t, so the per-step
    // displacement bounds the unit-step KKT residual ||x - P(x - g)||.
    const double resid_scale = 1.0 / std::min(step, 1.0);
    for (; it < kMaxIter; ++it) {
        const Eigen::VectorXd g = grad(x);
        auto next = project(x - step * g);
        if (!next) break;
        const double disp = (x - *next).cwiseAbs().maxCoeff();
        x = *next;
        const double obj = objective(x);
        if (obj < best_obj) {
            best_obj = obj;
            best = x;
        }
        if (disp * resid_scale <= 1e-8) {
            converged = true;
            break;
        }
    }

    out.iterations = it;
    out.status = converged ? SolveStatus::optimal : SolveStatus::max_iterations;
    const Eigen::VectorXd xs = best.head(n);
    out.schedule.values.assign(xs.data(), xs.data() + n);
    out.objective_value = best_obj;
    return out;
}

}  // namespace evsched::solvers
