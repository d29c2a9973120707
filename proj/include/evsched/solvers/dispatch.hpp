#pragma once

#include <optional>

#include "evsched/core/validate.hpp"
#include "evsched/solvers/cp.hpp"
#include "evsched/solvers/lmt.hpp"
#include "evsched/solvers/lp.hpp"
#include "evsched/solvers/lqr.hpp"
#include "evsched/solvers/mm.hpp"
#include "evsched/solvers/qp.hpp"
#include "evsched/solvers/result.hpp"

namespace evsched::solvers {

// Routes a complete problem to its solver. A feasible `init` seeds the
// iterative solvers (QP/CP); anything infeasible or mis-sized is silently
// dropped in favor of the deterministic default start.
inline SolveResult dispatch(const CompleteOp& op,
                            const std::optional<PowerSchedule>& init = std::nullopt) {
    validate(op);

    std::optional<Eigen::VectorXd> seed;
    if (init && init->grid == op.grid &&
        static_cast<int>(init->values.size()) == op.grid.num_slots) {
        if (validate_schedule(*init, op).feasible())
            seed = Eigen::Map<const Eigen::VectorXd>(init->values.data(),
                                                     static_cast<Eigen::Index>(init->values.size()));
    }

    if (auto* p = std::get_if<LpInstance>(&op.instance)) return solve_lp(*p, op.grid);
    if (auto* p = std::get_if<QpInstance>(&op.instance)) {
        if (p->Q.size() == 0 || p->Q.cwiseAbs().maxCoeff() == 0.0) {
            // Zero curvature degrades to an LP; avoids stalling on a flat
            // quadratic.
            LpInstance lp{p->c, p->A, p->b, p->A_eq, p->b_eq, p->bounds};
            return solve_lp(lp, op.grid);
        }
        return solve_qp(*p, op.grid, seed);
    }
    if (auto* p = std::get_if<MmInstance>(&op.instance)) return solve_mm(*p, op.grid);
    if (auto* p = std::get_if<CpInstance>(&op.instance)) return solve_cp(*p, op.grid, seed);
    if (auto* p = std::get_if<LmtInstance>(&op.instance)) return solve_lmt(*p, op.grid);
    return solve_lqr(std::get<LqrInstance>(op.instance), op.grid);
}

}  // namespace evsched::solvers
