#pragma once

#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "evsched/core/types.hpp"
#include "evsched/errors.hpp"

namespace evsched {

// Where a parameter of a complete problem instance came from.
enum class Provenance {
    request,         // Type 1: extracted from the user's request
    environment,     // Type 2: read from the smart meter
    knowledge_base,  // Type 3: common-knowledge defaults
};

inline std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::request: return "request";
        case Provenance::environment: return "environment";
        case Provenance::knowledge_base: return "knowledge_base";
    }
    return "?";
}

inline std::optional<Provenance> parse_provenance(const std::string& s) {
    if (s == "request") return Provenance::request;
    if (s == "environment") return Provenance::environment;
    if (s == "knowledge_base") return Provenance::knowledge_base;
    return std::nullopt;
}

// minimize c'x  s.t.  A x <= b,  A_eq x = b_eq,  x_min <= x_t <= x_max
struct LpInstance {
    Eigen::VectorXd c;
    Eigen::MatrixXd A;     // 0 x n when absent
    Eigen::VectorXd b;
    Eigen::MatrixXd A_eq;  // 0 x n when absent
    Eigen::VectorXd b_eq;
    PowerBounds bounds;
};

// minimize 1/2 x'Qx + c'x  under the same constraint shapes as the LP.
struct QpInstance {
    Eigen::MatrixXd Q;  // symmetric PSD
    Eigen::VectorXd c;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::MatrixXd A_eq;
    Eigen::VectorXd b_eq;
    PowerBounds bounds;
};

// minimize max_i (F_i x + g_i); components restricted to affine functions.
struct MmInstance {
    Eigen::MatrixXd F;  // one row per component
    Eigen::VectorXd g;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::MatrixXd A_eq;
    Eigen::VectorXd b_eq;
    PowerBounds bounds;
};

// Convex function given as a value/subgradient oracle pair.
struct ConvexOracle {
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> subgradient;
};

// minimize f(x)  s.t.  g_i(x) <= 0,  A_eq x = b_eq,  box bounds.
// `form` is a parametric description used for serialization; instances built
// from custom oracles may leave it empty (then they do not serialize).
struct CpInstance {
    ConvexOracle objective;
    std::vector<ConvexOracle> inequalities;
    Eigen::MatrixXd A_eq;
    Eigen::VectorXd b_eq;
    PowerBounds bounds;
    nlohmann::json form;
};

enum class TerminalMode { exact, at_least };

// Reach s_final from s_init in as few steps as possible under
// s_{t+1} = A s_t + B x_t with state and input boxes.
struct LmtInstance {
    Eigen::MatrixXd A_dyn;   // n x n
    Eigen::MatrixXd B_dyn;   // n x 1 (scalar input per slot)
    Eigen::VectorXd s_init;
    Eigen::VectorXd s_final;
    Eigen::VectorXd s_min;
    Eigen::VectorXd s_max;
    PowerBounds bounds;
    int max_horizon = 1;
    TerminalMode mode = TerminalMode::at_least;
};

// Finite-horizon regulator: minimize sum s'Qs + r x^2 (+ terminal s'Q_f s).
struct LqrInstance {
    Eigen::MatrixXd A_dyn;    // n x n
    Eigen::MatrixXd B_dyn;    // n x 1
    Eigen::MatrixXd Q_state;  // n x n PSD
    Eigen::MatrixXd Q_final;  // n x n PSD
    double r = 1.0;           // > 0
    int horizon = 1;
    Eigen::VectorXd s0;
    PowerBounds bounds;
};

using OpInstance = std::variant<LpInstance, QpInstance, MmInstance, CpInstance,
                                LmtInstance, LqrInstance>;

inline OpClass class_of(const OpInstance& inst) {
    switch (inst.index()) {
        case 0: return OpClass::LP;
        case 1: return OpClass::QP;
        case 2: return OpClass::MM;
        case 3: return OpClass::CP;
        case 4: return OpClass::LMT;
        default: return OpClass::LQR;
    }
}

// Fully parameterized problem ready for the solver bank, with per-parameter
// provenance tags.
struct CompleteOp {
    OpClass op_class = OpClass::LP;
    OpInstance instance;
    TimeGrid grid;
    std::map<std::string, Provenance> provenance;
};

inline int num_vars(const OpInstance& inst) {
    if (auto* p = std::get_if<LpInstance>(&inst)) return static_cast<int>(p->c.size());
    if (auto* p = std::get_if<QpInstance>(&inst)) return static_cast<int>(p->Q.rows());
    if (auto* p = std::get_if<MmInstance>(&inst)) return static_cast<int>(p->F.cols());
    if (auto* p = std::get_if<CpInstance>(&inst))
        return p->A_eq.rows() > 0 ? static_cast<int>(p->A_eq.cols()) : -1;
    if (auto* p = std::get_if<LmtInstance>(&inst)) return p->max_horizon;
    if (auto* p = std::get_if<LqrInstance>(&inst)) return p->horizon;
    return -1;
}

inline void check_symmetric_psd(const Eigen::MatrixXd& Q, double sym_tol, double eig_tol,
                                const std::string& name) {
    if (Q.rows() != Q.cols()) throw DimensionMismatch(name + " must be square");
    if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > sym_tol)
        throw Error(name + " is not symmetric within " + std::to_string(sym_tol));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Q + Q.transpose()));
    if (es.eigenvalues().minCoeff() < -eig_tol)
        throw Error(name + " is not positive semidefinite");
}

inline void validate(const CompleteOp& op) {
    validate(op.grid);
    if (class_of(op.instance) != op.op_class)
        throw Error("complete op: class tag does not match instance variant");
    const int n = op.grid.num_slots;
    if (auto* p = std::get_if<LpInstance>(&op.instance)) {
        validate(p->bounds);
        if (p->c.size() != n) throw DimensionMismatch("LP: c has wrong length");
        if (p->A.rows() != p->b.size() || (p->A.rows() > 0 && p->A.cols() != n))
            throw DimensionMismatch("LP: inequality system dimensions");
        if (p->A_eq.rows() != p->b_eq.size() || (p->A_eq.rows() > 0 && p->A_eq.cols() != n))
            throw DimensionMismatch("LP: equality system dimensions");
    } else if (auto* p = std::get_if<QpInstance>(&op.instance)) {
        validate(p->bounds);
        if (p->Q.rows() != n || p->c.size() != n) throw DimensionMismatch("QP: Q/c dimensions");
        check_symmetric_psd(p->Q, 1e-9, 1e-9, "QP: Q");
    } else if (auto* p = std::get_if<MmInstance>(&op.instance)) {
        validate(p->bounds);
        if (p->F.rows() < 1 || p->F.rows() != p->g.size())
            throw DimensionMismatch("MM: need rows(F) == len(g) >= 1");
        if (p->F.cols() != n) throw DimensionMismatch("MM: F has wrong width");
    } else if (auto* p = std::get_if<CpInstance>(&op.instance)) {
        validate(p->bounds);
        if (!p->objective.value || !p->objective.subgradient)
            throw Error("CP: objective oracle is incomplete");
    } else if (auto* p = std::get_if<LmtInstance>(&op.instance)) {
        validate(p->bounds);
        if (p->max_horizon < 1) throw Error("LMT: max_horizon must be >= 1");
        if (((p->s_init - p->s_min).minCoeff() < 0) || ((p->s_max - p->s_init).minCoeff() < 0))
            throw Error("LMT: s_init outside the state box");
    } else if (auto* p = std::get_if<LqrInstance>(&op.instance)) {
        validate(p->bounds);
        if (p->horizon < 1 || p->horizon > n) throw Error("LQR: need 1 <= N <= num_slots");
        if (!(p->r > 0)) throw Error("LQR: input weight r must be > 0");
        check_symmetric_psd(p->Q_state, 1e-9, 1e-9, "LQR: Q_state");
        check_symmetric_psd(p->Q_final, 1e-9, 1e-9, "LQR: Q_final");
    }
}

}  // namespace evsched
