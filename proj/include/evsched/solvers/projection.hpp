#pragma once

#include <optional>

#include <Eigen/Dense>

#include "evsched/errors.hpp"

namespace evsched::solvers {

inline Eigen::VectorXd clamp_to_box(const Eigen::VectorXd& v, const Eigen::VectorXd& lo,
                                    const Eigen::VectorXd& hi) {
    return v.cwiseMax(lo).cwiseMin(hi);
}

// Exact Euclidean projection onto {lo <= x <= hi, a'x = beta} via bisection on
// the multiplier of the single linear constraint. phi(lambda) = a'clamp(v - lambda a)
// is monotone nonincreasing, so the root bracket always exists when the target
// lies between the box extremes of a'x.
inline std::optional<Eigen::VectorXd> project_hyperplane_box(const Eigen::VectorXd& v,
                                                             const Eigen::VectorXd& a,
                                                             double beta,
                                                             const Eigen::VectorXd& lo,
                                                             const Eigen::VectorXd& hi) {
    const int n = static_cast<int>(v.size());
    if (a.cwiseAbs().maxCoeff() == 0.0)
        return std::abs(beta) <= 1e-9 ? std::optional<Eigen::VectorXd>(clamp_to_box(v, lo, hi))
                                      : std::nullopt;
    double amin = 0.0, amax = 0.0;
    for (int i = 0; i < n; ++i) {
        amin += a(i) * (a(i) > 0 ? lo(i) : hi(i));
        amax += a(i) * (a(i) > 0 ? hi(i) : lo(i));
    }
    const double span = 1e-9 * (1.0 + std::abs(amax) + std::abs(amin));
    if (beta < amin - span || beta > amax + span) return std::nullopt;

    auto phi = [&](double lam) { return a.dot(clamp_to_box(v - lam * a, lo, hi)); };
    double lo_l = -1.0, hi_l = 1.0;
    for (int k = 0; k < 200 && phi(lo_l) < beta; ++k) lo_l *= 2.0;
    for (int k = 0; k < 200 && phi(hi_l) > beta; ++k) hi_l *= 2.0;
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo_l + hi_l);
        if (phi(mid) >= beta)
            lo_l = mid;
        else
            hi_l = mid;
        if (hi_l - lo_l < 1e-16 * (1.0 + std::abs(lo_l))) break;
    }
    return clamp_to_box(v - 0.5 * (lo_l + hi_l) * a, lo, hi);
}

// Euclidean projection onto the affine set {A x = b}.
inline Eigen::VectorXd project_affine(const Eigen::VectorXd& v, const Eigen::MatrixXd& A,
                                      const Eigen::VectorXd& b) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    return v - cod.solve(A * v - b);  // minimum-norm correction
}

// Projection onto {A x = b} intersected with the box. Exact for zero or one
// equality row; Dykstra's alternating projections otherwise.
inline std::optional<Eigen::VectorXd> project_box_affine(const Eigen::VectorXd& v,
                                                         const Eigen::MatrixXd& A,
                                                         const Eigen::VectorXd& b,
                                                         const Eigen::VectorXd& lo,
                                                         const Eigen::VectorXd& hi) {
    if (A.rows() == 0) return clamp_to_box(v, lo, hi);
    if (A.rows() == 1) return project_hyperplane_box(v, A.row(0).transpose(), b(0), lo, hi);

    Eigen::VectorXd x = v;
    Eigen::VectorXd p = Eigen::VectorXd::Zero(v.size());
    Eigen::VectorXd q = Eigen::VectorXd::Zero(v.size());
    for (int k = 0; k < 20000; ++k) {
        const Eigen::VectorXd y = project_affine(x + p, A, b);
        p = x + p - y;
        const Eigen::VectorXd x2 = clamp_to_box(y + q, lo, hi);
        q = y + q - x2;
        const double delta = (x2 - x).cwiseAbs().maxCoeff();
        x = x2;
        if (delta < 1e-13 && (A * x - b).cwiseAbs().maxCoeff() < 1e-9) break;
    }
    if ((A * x - b).cwiseAbs().maxCoeff() > 1e-7) return std::nullopt;
    return x;
}

}  // namespace evsched::solvers
