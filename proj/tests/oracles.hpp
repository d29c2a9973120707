#pragma once

// Brute-force reference implementations used by the test suites. Everything
// here is deliberately independent of the solver code paths: vertex
// enumeration instead of simplex, refining grid search instead of projected
// gradient, interval reachability instead of LP feasibility, and a direct
// normal-equations solve instead of the Riccati recursion.

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

struct Poly {
    Eigen::MatrixXd A_ub;  // A_ub x <= b_ub
    Eigen::VectorXd b_ub;
    Eigen::MatrixXd A_eq;  // A_eq x = b_eq
    Eigen::VectorXd b_eq;
    Eigen::VectorXd lo, hi;
};

struct VertexOptimum {
    Eigen::VectorXd x;
    double objective;
};

// Exact LP oracle: enumerate candidate vertices as solutions of n active
// constraints (equalities always active), keep the feasible ones, return the
// best. A box-bounded feasible polytope always has a vertex, so "no feasible
// vertex" certifies infeasibility.
inline std::optional<VertexOptimum> vertex_enumerate_min(const Eigen::VectorXd& c,
                                                         const Poly& poly) {
    const int n = static_cast<int>(c.size());
    struct Hyperplane {
        Eigen::VectorXd a;
        double rhs;
    };
    std::vector<Hyperplane> planes;
    for (Eigen::Index i = 0; i < poly.A_ub.rows(); ++i)
        planes.push_back({poly.A_ub.row(i).transpose(), poly.b_ub(i)});
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e(j) = 1.0;
        planes.push_back({e, poly.lo(j)});
        planes.push_back({e, poly.hi(j)});
    }
    const int n_eq = static_cast<int>(poly.A_eq.rows());
    const int need = n - n_eq;
    if (need < 0) return std::nullopt;

    auto feasible = [&](const Eigen::VectorXd& x) {
        const double tol = 1e-7;
        for (Eigen::Index i = 0; i < poly.A_ub.rows(); ++i)
            if (poly.A_ub.row(i).dot(x) > poly.b_ub(i) + tol) return false;
        for (Eigen::Index i = 0; i < poly.A_eq.rows(); ++i)
            if (std::abs(poly.A_eq.row(i).dot(x) - poly.b_eq(i)) > tol) return false;
        for (int j = 0; j < n; ++j)
            if (x(j) < poly.lo(j) - tol || x(j) > poly.hi(j) + tol) return false;
        return true;
    };

    std::optional<VertexOptimum> best;
    std::vector<int> pick(static_cast<size_t>(std::max(need, 0)));
    std::function<void(int, int)> recurse = [&](int start, int depth) {
        if (depth == need) {
            Eigen::MatrixXd M(n, n);
            Eigen::VectorXd rhs(n);
            for (int i = 0; i < n_eq; ++i) {
                M.row(i) = poly.A_eq.row(i);
                rhs(i) = poly.b_eq(i);
            }
            for (int i = 0; i < need; ++i) {
                M.row(n_eq + i) = planes[static_cast<size_t>(pick[static_cast<size_t>(i)])].a.transpose();
                rhs(n_eq + i) = planes[static_cast<size_t>(pick[static_cast<size_t>(i)])].rhs;
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
            if (lu.rank() < n) return;
            const Eigen::VectorXd x = lu.solve(rhs);
            if (!feasible(x)) return;
            const double obj = c.dot(x);
            if (!best || obj < best->objective - 1e-12) best = VertexOptimum{x, obj};
            return;
        }
        for (int i = start; i < static_cast<int>(planes.size()); ++i) {
            pick[static_cast<size_t>(depth)] = i;
            recurse(i + 1, depth + 1);
        }
    };
    recurse(0, 0);
    return best;
}

// Multi-resolution grid search over a box, refining around the incumbent
// until the per-dimension step reaches final_step (the 1e-3 grid, reached
// hierarchically; exact enumeration of a flat 1e-3 grid is infeasible beyond
// two dimensions). Valid for the convex objectives used in these tests.
inline VertexOptimum refine_grid_min(const std::function<double(const Eigen::VectorXd&)>& f,
                                     Eigen::VectorXd lo, Eigen::VectorXd hi, double final_step) {
    const int d = static_cast<int>(lo.size());
    const Eigen::VectorXd lo0 = lo, hi0 = hi;
    Eigen::VectorXd best_x = 0.5 * (lo + hi);
    double best_f = f(best_x);
    constexpr int kPoints = 11;
    while (true) {
        double max_step = 0.0;
        std::vector<int> idx(static_cast<size_t>(d), 0);
        Eigen::VectorXd step(d);
        for (int j = 0; j < d; ++j) {
            step(j) = (hi(j) - lo(j)) / (kPoints - 1);
            max_step = std::max(max_step, step(j));
        }
        Eigen::VectorXd x(d);
        while (true) {
            for (int j = 0; j < d; ++j) x(j) = lo(j) + step(j) * idx[static_cast<size_t>(j)];
            const double v = f(x);
            if (v < best_f) {
                best_f = v;
                best_x = x;
            }
            int j = 0;
            for (; j < d; ++j) {
                if (++idx[static_cast<size_t>(j)] < kPoints) break;
                idx[static_cast<size_t>(j)] = 0;
            }
            if (j == d) break;
        }
        if (max_step <= final_step) break;
        for (int j = 0; j < d; ++j) {
            const double w = 2.0 * step(j);
            lo(j) = std::max(lo0(j), best_x(j) - w);
            hi(j) = std::min(hi0(j), best_x(j) + w);
        }
    }
    return {best_x, best_f};
}

// Same grid oracle with one equality row eliminated by substitution. The
// pivot coordinate is solved from the others and out-of-bounds combinations
// are discarded (scored +inf). A constrained minimizer can sit exactly where
// the pivot hits one of its bounds, a face the reduced grid cannot align
// with, so both pivot-at-bound subproblems are enumerated recursively and the
// best of the three branches wins.
inline VertexOptimum refine_grid_min_eq(const std::function<double(const Eigen::VectorXd&)>& f,
                                        const Eigen::VectorXd& a, double beta,
                                        const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                        double final_step) {
    const int n = static_cast<int>(lo.size());
    int pivot = 0;
    for (int j = 1; j < n; ++j)
        if (std::abs(a(j)) > std::abs(a(pivot))) pivot = j;

    if (n == 1) {
        Eigen::VectorXd x(1);
        x(0) = beta / a(0);
        const bool ok = x(0) >= lo(0) - 1e-9 && x(0) <= hi(0) + 1e-9;
        return {x, ok ? f(x) : std::numeric_limits<double>::infinity()};
    }

    std::vector<int> free_idx;
    for (int j = 0; j < n; ++j)
        if (j != pivot) free_idx.push_back(j);
    Eigen::VectorXd flo(n - 1), fhi(n - 1);
    for (int j = 0; j < n - 1; ++j) {
        flo(j) = lo(free_idx[static_cast<size_t>(j)]);
        fhi(j) = hi(free_idx[static_cast<size_t>(j)]);
    }
    auto lift = [&](const Eigen::VectorXd& xf, double pivot_value) {
        Eigen::VectorXd x(n);
        for (int j = 0; j < n - 1; ++j) x(free_idx[static_cast<size_t>(j)]) = xf(j);
        x(pivot) = pivot_value;
        return x;
    };
    auto lift_eq = [&](const Eigen::VectorXd& xf) {
        double rest = beta;
        for (int j = 0; j < n - 1; ++j) rest -= a(free_idx[static_cast<size_t>(j)]) * xf(j);
        return lift(xf, rest / a(pivot));
    };

    // Branch 1: pivot strictly between its bounds, grid over the free coords.
    auto wrapped = [&](const Eigen::VectorXd& xf) {
        const Eigen::VectorXd x = lift_eq(xf);
        if (x(pivot) < lo(pivot) - 1e-9 || x(pivot) > hi(pivot) + 1e-9)
            return std::numeric_limits<double>::infinity();
        return f(x);
    };
    const VertexOptimum interior = refine_grid_min(wrapped, flo, fhi, final_step);
    VertexOptimum best{lift_eq(interior.x), interior.objective};

    // Branches 2 and 3: pivot pinned at a bound, recurse on the rest.
    Eigen::VectorXd a_free(n - 1);
    for (int j = 0; j < n - 1; ++j) a_free(j) = a(free_idx[static_cast<size_t>(j)]);
    for (const double bound : {lo(pivot), hi(pivot)}) {
        auto f_sub = [&](const Eigen::VectorXd& xf) { return f(lift(xf, bound)); };
        const VertexOptimum sub =
            refine_grid_min_eq(f_sub, a_free, beta - a(pivot) * bound, flo, fhi, final_step);
        if (sub.objective < best.objective) best = {lift(sub.x, bound), sub.objective};
    }
    return best;
}

// Exact reachability for scalar systems with A > 0, B > 0: the reachable set
// after each step is an interval, propagated by interval arithmetic and
// clipped by the state box. Returns the minimal feasible horizon.
struct ScalarLmt {
    double a, b, s0, sf, smin, smax, xmin, xmax;
    bool at_least;
    int max_horizon;
};

inline std::optional<int> interval_reach_min_tau(const ScalarLmt& p) {
    auto feasible_at = [&](double lo, double hi) {
        if (p.at_least) return hi >= p.sf - 1e-9;
        return p.sf >= lo - 1e-9 && p.sf <= hi + 1e-9;
    };
    double lo = p.s0, hi = p.s0;
    if (feasible_at(lo, hi)) return 0;
    for (int t = 1; t <= p.max_horizon; ++t) {
        lo = p.a * lo + p.b * p.xmin;
        hi = p.a * hi + p.b * p.xmax;
        lo = std::max(lo, p.smin);
        hi = std::min(hi, p.smax);
        if (lo > hi + 1e-12) return std::nullopt;  // every trajectory left the box
        if (feasible_at(lo, hi)) return t;
    }
    return std::nullopt;
}

// Unconstrained finite-horizon LQ optimum by assembling the quadratic in the
// input sequence and solving the normal equations (the calculus route).
struct LqDirect {
    Eigen::VectorXd x;
    double cost;
};

inline LqDirect direct_lq_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                const Eigen::MatrixXd& Q, const Eigen::MatrixXd& Qf, double r,
                                int N, const Eigen::VectorXd& s0) {
    const int ns = static_cast<int>(s0.size());
    std::vector<Eigen::MatrixXd> M(N + 1, Eigen::MatrixXd::Zero(ns, N));
    std::vector<Eigen::VectorXd> d(N + 1);
    d[0] = s0;
    for (int t = 1; t <= N; ++t) {
        M[t] = A * M[t - 1];
        M[t].col(t - 1) += B.col(0);
        d[t] = A * d[t - 1];
    }
    Eigen::MatrixXd H = r * Eigen::MatrixXd::Identity(N, N);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(N);
    for (int t = 0; t < N; ++t) {
        H += M[t].transpose() * Q * M[t];
        g += M[t].transpose() * Q * d[t];
    }
    H += M[N].transpose() * Qf * M[N];
    g += M[N].transpose() * Qf * d[N];
    const Eigen::VectorXd x = H.ldlt().solve(-g);
    double cost = r * x.squaredNorm();
    for (int t = 0; t < N; ++t) {
        const Eigen::VectorXd st = d[t] + M[t] * x;
        cost += st.dot(Q * st);
    }
    const Eigen::VectorXd sN = d[N] + M[N] * x;
    cost += sN.dot(Qf * sN);
    return {x, cost};
}

// Cheapest-first fill: the optimal cost of the single-energy-row LP.
inline double greedy_price_fill_cost(const std::vector<double>& prices, double e_req,
                                     double x_max, double dt) {
    std::vector<size_t> order(prices.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return prices[a] < prices[b]; });
    double remaining = e_req, cost = 0.0;
    for (size_t idx : order) {
        if (remaining <= 1e-12) break;
        const double e = std::min(remaining, x_max * dt);
        cost += prices[idx] * e;
        remaining -= e;
    }
    return cost;
}

// Water-filling level for peak shaving with ample power headroom: L solves
// sum_t max(L - load_t, 0) * dt = E; the optimal peak is max(L, max load).
inline double water_fill_peak(const std::vector<double>& load, double e_req, double dt) {
    double lo = 0.0, hi = *std::max_element(load.begin(), load.end());
    auto energy_at = [&](double level) {
        double e = 0.0;
        for (double l : load) e += std::max(level - l, 0.0) * dt;
        return e;
    };
    while (energy_at(hi) < e_req) hi += std::max(hi, 1.0);
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        (energy_at(mid) < e_req ? lo : hi) = mid;
    }
    const double level = 0.5 * (lo + hi);
    return std::max(level, *std::max_element(load.begin(), load.end()));
}

}  // namespace oracles
