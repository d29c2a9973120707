#pragma once

#include <cmath>
#include <map>
#include <string>

#include "evsched/agents/defaults.hpp"
#include "evsched/agents/time_params.hpp"
#include "evsched/core/energy.hpp"
#include "evsched/core/environment.hpp"
#include "evsched/core/instances.hpp"
#include "evsched/core/serialize.hpp"

namespace evsched::agents {

struct RequestParameters {
    TimeParameters time;
    std::optional<double> soc_target;        // fraction in (0, 1]
    std::map<std::string, double> extras;    // named scalars, e.g. peak_cap_kw
};

// All Type-1 extraction for one request: the time window through the gateway,
// the rest through deterministic text rules.
inline RequestParameters gather_request_parameters(const std::string& request_text,
                                                   const EnvironmentSnapshot& env,
                                                   const llm::BackendConfig& backend,
                                                   const DefaultsBook& defaults) {
    RequestParameters req;
    req.time = extract_time_parameters(request_text, env.reference_clock, backend, defaults);
    req.soc_target = extract_soc_target(request_text);
    if (auto cap = extract_peak_cap_kw(request_text)) req.extras["peak_cap_kw"] = *cap;
    return req;
}

// Scheduling grid for a window: the start snaps down to the environment's
// slot boundaries, the slot count rounds the window up to whole slots.
inline TimeGrid build_grid(const TimeParameters& time, const EnvironmentSnapshot& env) {
    const double window = time.window_hours();
    if (!(window > 0)) throw UnresolvableTime("window must be positive");
    const int num_slots = static_cast<int>(std::ceil(window / env.grid.delta_t - 1e-9));

    const double offset_hours = hours_between(env.grid.start, time.start);
    const auto offset_slots = static_cast<int64_t>(std::floor(offset_hours / env.grid.delta_t + 1e-9));
    if (offset_slots < 0)
        throw WindowTooLong("window starts before the environment data horizon");
    if (offset_slots + num_slots > env.grid.num_slots)
        throw WindowTooLong("window extends past the environment data horizon (" +
                            std::to_string(offset_slots + num_slots) + " > " +
                            std::to_string(env.grid.num_slots) + " slots)");

    TimeGrid grid;
    grid.start = env.grid.start.add_hours(static_cast<double>(offset_slots) * env.grid.delta_t);
    grid.delta_t = env.grid.delta_t;
    grid.num_slots = num_slots;
    return grid;
}

namespace detail {

inline int slot_offset(const TimeGrid& grid, const EnvironmentSnapshot& env) {
    return static_cast<int>(
        std::llround(hours_between(env.grid.start, grid.start) / env.grid.delta_t));
}

inline Eigen::VectorXd slice(const std::vector<double>& v, int offset, int count) {
    Eigen::VectorXd out(count);
    for (int i = 0; i < count; ++i) out(i) = v[static_cast<size_t>(offset + i)];
    return out;
}

// Gram matrix of the adjacent-difference operator, scaled so that
// (1/2) x'Qx = sum_t (x_{t+1} - x_t)^2.
inline Eigen::MatrixXd smoothing_q(int n) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(std::max(n - 1, 0), n);
    for (int t = 0; t + 1 < n; ++t) {
        d(t, t) = -1.0;
        d(t, t + 1) = 1.0;
    }
    return 2.0 * d.transpose() * d;
}

}  // namespace detail

// Builds the EV instantiation of the chosen class from the request window
// (Type 1), the smart-meter view (Type 2) and the defaults book (Type 3),
// with per-parameter provenance.
inline CompleteOp assemble_op(OpClass op_class, const RequestParameters& req,
                              const EnvironmentSnapshot& env, const DefaultsBook& defaults) {
    const TimeGrid grid = build_grid(req.time, env);
    const int n = grid.num_slots;
    const int offset = detail::slot_offset(grid, env);
    const double dt = grid.delta_t;
    const double soc_target = req.soc_target ? *req.soc_target : defaults.soc_target();
    const double e_req = energy_requirement(soc_target, env);
    const Eigen::VectorXd prices = detail::slice(env.prices, offset, n);
    const Eigen::VectorXd load = detail::slice(env.non_flexible_load, offset, n);

    CompleteOp op;
    op.op_class = op_class;
    op.grid = grid;
    auto tag = [&](const std::string& name, Provenance p) { op.provenance[name] = p; };

    // Shared building blocks: one energy row sum_t dt*x_t >= E_req encoded as
    // A = (-dt ... -dt), b = -E_req.
    Eigen::MatrixXd energy_row = Eigen::MatrixXd::Constant(1, n, -dt);
    Eigen::VectorXd energy_rhs = Eigen::VectorXd::Constant(1, -e_req);

    switch (op_class) {
        case OpClass::LP: {
            LpInstance p;
            p.c = prices * dt;
            p.A = energy_row;
            p.b = energy_rhs;
            p.A_eq = Eigen::MatrixXd(0, n);
            p.b_eq = Eigen::VectorXd(0);
            p.bounds = {0.0, env.bounds.x_max};
            op.instance = std::move(p);
            tag("c", Provenance::environment);
            tag("A", Provenance::request);
            tag("b", Provenance::request);
            tag("bounds", Provenance::environment);
            break;
        }
        case OpClass::LMT: {
            LmtInstance p;
            p.A_dyn = Eigen::MatrixXd::Constant(1, 1, 1.0);
            p.B_dyn = Eigen::MatrixXd::Constant(1, 1, env.efficiency * dt);
            p.s_init = Eigen::VectorXd::Constant(1, env.soc_init * env.battery_capacity_kwh);
            p.s_final = Eigen::VectorXd::Constant(1, soc_target * env.battery_capacity_kwh);
            p.s_min = Eigen::VectorXd::Constant(1, env.soc_min * env.battery_capacity_kwh);
            p.s_max = Eigen::VectorXd::Constant(1, env.soc_max * env.battery_capacity_kwh);
            p.bounds = {0.0, env.bounds.x_max};
            p.max_horizon = n;
            p.mode = TerminalMode::at_least;  // charging past the target is never required
            op.instance = std::move(p);
            tag("A_dyn", Provenance::knowledge_base);
            tag("B_dyn", Provenance::environment);
            tag("s_init", Provenance::environment);
            tag("s_final", Provenance::request);
            tag("s_min", Provenance::environment);
            tag("s_max", Provenance::environment);
            tag("bounds", Provenance::environment);
            tag("max_horizon", Provenance::request);
            break;
        }
        case OpClass::MM: {
            MmInstance p;
            p.F = Eigen::MatrixXd::Identity(n, n);  // f_t(x) = x_t + load_t
            p.g = load;
            p.A = energy_row;
            p.b = energy_rhs;
            p.A_eq = Eigen::MatrixXd(0, n);
            p.b_eq = Eigen::VectorXd(0);
            p.bounds = {0.0, env.bounds.x_max};
            auto cap_it = req.extras.find("peak_cap_kw");
            if (cap_it != req.extras.end()) {
                p.A.conservativeResize(1 + n, n);
                p.b.conservativeResize(1 + n);
                p.A.bottomRows(n) = Eigen::MatrixXd::Identity(n, n);
                p.b.tail(n) = Eigen::VectorXd::Constant(n, cap_it->second) - load;
                tag("peak_cap", Provenance::request);
            }
            op.instance = std::move(p);
            tag("F", Provenance::environment);
            tag("g", Provenance::environment);
            tag("A", Provenance::request);
            tag("b", Provenance::request);
            tag("bounds", Provenance::environment);
            break;
        }
        case OpClass::QP: {
            QpInstance p;
            p.Q = detail::smoothing_q(n);
            p.c = Eigen::VectorXd::Zero(n);
            p.A = Eigen::MatrixXd(0, n);
            p.b = Eigen::VectorXd(0);
            p.A_eq = Eigen::MatrixXd::Constant(1, n, dt);
            p.b_eq = Eigen::VectorXd::Constant(1, e_req);
            p.bounds = {0.0, env.bounds.x_max};
            op.instance = std::move(p);
            tag("Q", Provenance::knowledge_base);
            tag("c", Provenance::knowledge_base);
            tag("A_eq", Provenance::request);
            tag("b_eq", Provenance::request);
            tag("bounds", Provenance::environment);
            break;
        }
        case OpClass::CP: {
            CpInstance p;
            const double exponent = defaults.grid_damage_exponent();
            p.form = {{"kind", "shifted_power_sum"},
                      {"offsets", vec_to_json(load)},
                      {"exponent", exponent}};
            p.objective = build_convex_oracle(p.form);
            p.A_eq = Eigen::MatrixXd::Constant(1, n, dt);
            p.b_eq = Eigen::VectorXd::Constant(1, e_req);
            p.bounds = {0.0, env.bounds.x_max};
            op.instance = std::move(p);
            tag("objective", Provenance::knowledge_base);
            tag("A_eq", Provenance::request);
            tag("b_eq", Provenance::request);
            tag("bounds", Provenance::environment);
            break;
        }
        case OpClass::LQR: {
            LqrInstance p;
            p.A_dyn = Eigen::MatrixXd::Constant(1, 1, 1.0);
            p.B_dyn = Eigen::MatrixXd::Constant(1, 1, env.efficiency * dt);
            p.Q_state = Eigen::MatrixXd::Constant(1, 1, 1.0);
            p.Q_final = Eigen::MatrixXd::Constant(1, 1, 1.0);
            p.r = defaults.lqr_input_weight();
            p.horizon = n;
            p.s0 = Eigen::VectorXd::Constant(
                1, (env.soc_init - soc_target) * env.battery_capacity_kwh);
            p.bounds = {0.0, env.bounds.x_max};
            op.instance = std::move(p);
            tag("A_dyn", Provenance::knowledge_base);
            tag("B_dyn", Provenance::environment);
            tag("Q_state", Provenance::knowledge_base);
            tag("Q_final", Provenance::knowledge_base);
            tag("r", Provenance::knowledge_base);
            tag("horizon", Provenance::request);
            tag("s0", Provenance::environment);
            tag("bounds", Provenance::environment);
            break;
        }
    }
    tag("grid", Provenance::request);
    validate(op);
    return op;
}

}  // namespace evsched::agents
