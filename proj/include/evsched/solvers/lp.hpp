#pragma once

#include "evsched/core/instances.hpp"
#include "evsched/solvers/result.hpp"
#include "evsched/solvers/simplex.hpp"

namespace evsched::solvers {

inline SolveResult solve_lp(const LpInstance& inst, const TimeGrid& grid) {
    const int n = static_cast<int>(inst.c.size());
    if (n != grid.num_slots) throw DimensionMismatch("LP: c length does not match grid");

    LpProblem p;
    p.c = inst.c;
    p.A_ub = inst.A;
    p.b_ub = inst.b;
    p.A_eq = inst.A_eq;
    p.b_eq = inst.b_eq;
    p.lower = Eigen::VectorXd::Constant(n, inst.bounds.x_min);
    p.upper = Eigen::VectorXd::Constant(n, inst.bounds.x_max);
    const LpSolution sol = solve_lp_problem(p);

    SolveResult out;
    out.schedule.grid = grid;
    out.iterations = sol.iterations;
    switch (sol.status) {
        case LpStatus::optimal: out.status = SolveStatus::optimal; break;
        case LpStatus::infeasible: out.status = SolveStatus::infeasible; break;
        case LpStatus::unbounded: out.status = SolveStatus::unbounded; break;
    }
    if (sol.status == LpStatus::optimal) {
        out.schedule.values.assign(sol.x.data(), sol.x.data() + n);
        out.objective_value = sol.objective;
    } else {
        out.schedule.values.assign(n, 0.0);
    }
    return out;
}

}  // namespace evsched::solvers
