#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "evsched/errors.hpp"

namespace evsched::solvers {

// General LP in the shape used throughout the solver bank:
//   minimize c'x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  lower <= x <= upper.
// Bounds may be +/-inf per component, but every variable needs at least one
// finite bound.
struct LpProblem {
    Eigen::VectorXd c;
    Eigen::MatrixXd A_ub;
    Eigen::VectorXd b_ub;
    Eigen::MatrixXd A_eq;
    Eigen::VectorXd b_eq;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Eigen::VectorXd x;
    double objective = 0.0;
    int iterations = 0;
};

// Two-phase primal simplex for bounded variables with Bland's rule.
//
// Nonbasic variables rest at one of their bounds; inequality rows get slack
// columns, every row gets a phase-1 artificial. Bland's rule (entering:
// lowest-index improving column; leaving: lowest-index tie among minimal
// ratios) makes the pivot sequence deterministic and cycle-free, and keeps
// the returned vertex invariant under positive scaling of c. Basic values are
// recomputed from a fresh LU factorization each iteration, which is cheap at
// the problem sizes this project handles and avoids drift.
class BoundedSimplex {
  public:
    explicit BoundedSimplex(const LpProblem& p) : p_(p) {
        n_ = static_cast<int>(p.c.size());
        m1_ = static_cast<int>(p.A_ub.rows());
        m2_ = static_cast<int>(p.A_eq.rows());
        m_ = m1_ + m2_;
        total_ = n_ + m1_ + m_;  // structural + slack + artificial

        cols_ = Eigen::MatrixXd::Zero(m_, total_);
        if (m1_ > 0) cols_.topLeftCorner(m1_, n_) = p.A_ub;
        if (m2_ > 0) cols_.bottomLeftCorner(m2_, n_) = p.A_eq;
        for (int i = 0; i < m1_; ++i) cols_(i, n_ + i) = 1.0;  // slacks

        rhs_.resize(m_);
        if (m1_ > 0) rhs_.head(m1_) = p.b_ub;
        if (m2_ > 0) rhs_.tail(m2_) = p.b_eq;

        const double inf = std::numeric_limits<double>::infinity();
        lower_.assign(total_, 0.0);
        upper_.assign(total_, inf);
        for (int j = 0; j < n_; ++j) {
            lower_[j] = p.lower(j);
            upper_[j] = p.upper(j);
        }
        // slack: [0, inf); artificial bounds set in solve().
    }

    LpSolution solve() {
        LpSolution out;
        if (m_ == 0) return solve_box_only();

        value_.assign(total_, 0.0);
        at_upper_.assign(total_, false);
        basic_.assign(total_, false);
        for (int j = 0; j < n_ + m1_; ++j) {
            if (std::isfinite(lower_[j])) {
                value_[j] = lower_[j];
            } else if (std::isfinite(upper_[j])) {
                value_[j] = upper_[j];
                at_upper_[j] = true;
            } else {
                throw NumericalFailure("simplex: free variable without any finite bound");
            }
        }

        // Artificial start: one per row, signed to absorb the residual.
        Eigen::VectorXd r = rhs_;
        for (int j = 0; j < n_ + m1_; ++j)
            if (value_[j] != 0.0) r -= cols_.col(j) * value_[j];
        basis_.resize(m_);
        for (int i = 0; i < m_; ++i) {
            const int a = n_ + m1_ + i;
            cols_(i, a) = r(i) >= 0 ? 1.0 : -1.0;
            value_[a] = std::abs(r(i));
            basic_[a] = true;
            basis_[i] = a;
        }

        // Phase 1: minimize the sum of artificials.
        Eigen::VectorXd c1 = Eigen::VectorXd::Zero(total_);
        for (int i = 0; i < m_; ++i) c1(n_ + m1_ + i) = 1.0;
        if (!run(c1, out.iterations))
            throw NumericalFailure("simplex: phase 1 reported unbounded");
        double infeas = 0.0;
        for (int i = 0; i < m_; ++i) infeas += value_[n_ + m1_ + i];
        if (infeas > 1e-7 * (1.0 + rhs_.cwiseAbs().maxCoeff())) {
            out.status = LpStatus::infeasible;
            return out;
        }
        drive_out_artificials();
        for (int i = 0; i < m_; ++i) {
            const int a = n_ + m1_ + i;
            lower_[a] = upper_[a] = 0.0;
            if (!basic_[a]) value_[a] = 0.0;
        }

        // Phase 2: the real objective.
        Eigen::VectorXd c2 = Eigen::VectorXd::Zero(total_);
        c2.head(n_) = p_.c;
        if (!run(c2, out.iterations)) {
            out.status = LpStatus::unbounded;
            return out;
        }

        out.status = LpStatus::optimal;
        out.x.resize(n_);
        for (int j = 0; j < n_; ++j) {
            double v = value_[j];
            if (std::isfinite(lower_[j])) v = std::max(v, lower_[j]);
            if (std::isfinite(upper_[j])) v = std::min(v, upper_[j]);
            out.x(j) = v;
        }
        out.objective = p_.c.dot(out.x);
        return out;
    }

  private:
    LpSolution solve_box_only() {
        LpSolution out;
        out.x.resize(n_);
        for (int j = 0; j < n_; ++j) {
            const double cj = p_.c(j);
            const double pick = cj > 0   ? lower_[j]
                                : cj < 0 ? upper_[j]
                                         : (std::isfinite(lower_[j]) ? lower_[j] : upper_[j]);
            if (!std::isfinite(pick)) {
                out.status = LpStatus::unbounded;
                return out;
            }
            if (lower_[j] > upper_[j]) {
                out.status = LpStatus::infeasible;
                return out;
            }
            out.x(j) = pick;
        }
        out.status = LpStatus::optimal;
        out.objective = p_.c.dot(out.x);
        return out;
    }

    // Returns false on unbounded.
    bool run(const Eigen::VectorXd& cost, int& iterations) {
        const double inf = std::numeric_limits<double>::infinity();
        const double tol_d = 1e-9 * (1.0 + cost.cwiseAbs().maxCoeff());
        for (int iter = 0; iter < kIterCap; ++iter) {
            Eigen::MatrixXd B(m_, m_);
            for (int i = 0; i < m_; ++i) B.col(i) = cols_.col(basis_[i]);
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
            Eigen::PartialPivLU<Eigen::MatrixXd> luT(B.transpose());

            // Refresh basic values from scratch.
            Eigen::VectorXd r = rhs_;
            for (int j = 0; j < total_; ++j)
                if (!basic_[j] && value_[j] != 0.0) r -= cols_.col(j) * value_[j];
            const Eigen::VectorXd xb = lu.solve(r);
            for (int i = 0; i < m_; ++i) value_[basis_[i]] = xb(i);

            Eigen::VectorXd cb(m_);
            for (int i = 0; i < m_; ++i) cb(i) = cost(basis_[i]);
            const Eigen::VectorXd y = luT.solve(cb);

            int enter = -1;
            double sigma = 1.0;
            for (int j = 0; j < total_; ++j) {
                if (basic_[j]) continue;
                if (upper_[j] - lower_[j] <= 1e-15) continue;  // fixed
                const double d = cost(j) - y.dot(cols_.col(j));
                if (!at_upper_[j] && d < -tol_d) {
                    enter = j;
                    sigma = 1.0;
                    break;
                }
                if (at_upper_[j] && d > tol_d) {
                    enter = j;
                    sigma = -1.0;
                    break;
                }
            }
            if (enter < 0) return true;  // optimal for this phase

            const Eigen::VectorXd w = lu.solve(cols_.col(enter));
            double t_best = inf;
            int leave_pos = -1, leave_var = -1;
            for (int i = 0; i < m_; ++i) {
                const double wi = sigma * w(i);
                if (std::abs(wi) < 1e-11) continue;
                const int vi = basis_[i];
                double ti;
                if (wi > 0) {
                    if (!std::isfinite(lower_[vi])) continue;
                    ti = (value_[vi] - lower_[vi]) / wi;
                } else {
                    if (!std::isfinite(upper_[vi])) continue;
                    ti = (upper_[vi] - value_[vi]) / (-wi);
                }
                ti = std::max(ti, 0.0);
                if (ti < t_best - 1e-12 || (ti <= t_best + 1e-12 && vi < leave_var)) {
                    t_best = ti;
                    leave_pos = i;
                    leave_var = vi;
                }
            }
            const double t_bound = upper_[enter] - lower_[enter];
            const double t = std::min(t_bound, t_best);
            if (!std::isfinite(t)) return false;  // unbounded direction

            for (int i = 0; i < m_; ++i) value_[basis_[i]] -= sigma * t * w(i);
            if (t_bound <= t_best) {
                // The entering variable flips to its other bound; basis unchanged.
                at_upper_[enter] = !at_upper_[enter];
                value_[enter] = at_upper_[enter] ? upper_[enter] : lower_[enter];
            } else {
                value_[enter] = sigma > 0 ? lower_[enter] + t : upper_[enter] - t;
                basic_[enter] = true;
                const int vl = basis_[leave_pos];
                basic_[vl] = false;
                const bool leaves_low = sigma * w(leave_pos) > 0;
                at_upper_[vl] = !leaves_low;
                value_[vl] = leaves_low ? lower_[vl] : upper_[vl];
                basis_[leave_pos] = enter;
            }
            ++iterations;
        }
        throw NumericalFailure("simplex: iteration cap exceeded");
    }

    // Pivot zero-valued artificial variables out of the basis where possible;
    // rows with no eligible replacement column are redundant and keep their
    // artificial pinned at zero.
    void drive_out_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < n_ + m1_) continue;
            Eigen::MatrixXd B(m_, m_);
            for (int k = 0; k < m_; ++k) B.col(k) = cols_.col(basis_[k]);
            Eigen::PartialPivLU<Eigen::MatrixXd> luT(B.transpose());
            Eigen::VectorXd ei = Eigen::VectorXd::Zero(m_);
            ei(i) = 1.0;
            const Eigen::VectorXd z = luT.solve(ei);
            for (int j = 0; j < n_ + m1_; ++j) {
                if (basic_[j]) continue;
                if (std::abs(z.dot(cols_.col(j))) > 1e-9) {
                    const int a = basis_[i];
                    basic_[a] = false;
                    at_upper_[a] = false;
                    value_[a] = 0.0;
                    basic_[j] = true;
                    basis_[i] = j;
                    break;
                }
            }
        }
    }

    static constexpr int kIterCap = 50000;

    LpProblem p_;
    int n_ = 0, m1_ = 0, m2_ = 0, m_ = 0, total_ = 0;
    Eigen::MatrixXd cols_;
    Eigen::VectorXd rhs_;
    std::vector<double> lower_, upper_, value_;
    std::vector<bool> at_upper_, basic_;
    std::vector<int> basis_;
};

inline LpSolution solve_lp_problem(const LpProblem& p) { return BoundedSimplex(p).solve(); }

}  // namespace evsched::solvers
