#include <catch2/catch_amalgamated.hpp>

#include "evsched/core/serialize.hpp"
#include "evsched/core/validate.hpp"
#include "evsched/solvers/cp.hpp"
#include "evsched/solvers/qp.hpp"
#include "gen_instances.hpp"

using namespace evsched;
using solvers::SolveStatus;

namespace {

TimeGrid grid_of(int T) { return {Timestamp::parse("2024-06-01T00:00"), 1.0, T}; }

QpInstance box_qp(const Eigen::MatrixXd& Q, const Eigen::VectorXd& c, double lo, double hi) {
    QpInstance p;
    p.Q = Q;
    p.c = c;
    const auto n = c.size();
    p.A = Eigen::MatrixXd(0, n);
    p.b = Eigen::VectorXd(0);
    p.A_eq = Eigen::MatrixXd(0, n);
    p.b_eq = Eigen::VectorXd(0);
    p.bounds = {lo, hi};
    return p;
}

}  // namespace

TEST_CASE("solve_qp: sum of squares rests at the lower bound") {
    const int T = 3;
    const auto r = solvers::solve_qp(
        box_qp(2.0 * Eigen::MatrixXd::Identity(T, T), Eigen::VectorXd::Zero(T), 0.0, 1.0),
        grid_of(T));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.objective_value == Catch::Approx(0.0).margin(1e-10));
    for (double v : r.schedule.values) CHECK(v == Catch::Approx(0.0).margin(1e-7));
}

TEST_CASE("solve_qp: smoothing objective with an energy equality is constant") {
    const int T = 3;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(T - 1, T);
    for (int t = 0; t + 1 < T; ++t) {
        d(t, t) = -1.0;
        d(t, t + 1) = 1.0;
    }
    QpInstance p = box_qp(2.0 * d.transpose() * d, Eigen::VectorXd::Zero(T), 0.0, 2.0);
    p.A_eq = Eigen::MatrixXd::Constant(1, T, 1.0);
    p.b_eq = Eigen::VectorXd::Constant(1, 3.0);
    const auto r = solvers::solve_qp(p, grid_of(T));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.objective_value == Catch::Approx(0.0).margin(1e-9));
    for (double v : r.schedule.values) CHECK(v == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("solve_qp: separable quadratic saturates at the upper bound") {
    const auto r = solvers::solve_qp(
        box_qp(2.0 * Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(-2.0, -4.0), 0.0, 1.0),
        grid_of(2));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.schedule.values[0] == Catch::Approx(1.0).margin(1e-6));
    CHECK(r.schedule.values[1] == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("solve_qp: inequality rows handled through bounded slacks") {
    // minimize x1^2 + x2^2 - 2 x1 - 4 x2 over [0,1]^2 with x1 + x2 <= 1;
    // KKT gives (0, 1) with objective -3.
    QpInstance p = box_qp(2.0 * Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(-2.0, -4.0),
                          0.0, 1.0);
    p.A = Eigen::MatrixXd::Constant(1, 2, 1.0);
    p.b = Eigen::VectorXd::Constant(1, 1.0);
    const auto r = solvers::solve_qp(p, grid_of(2));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.objective_value == Catch::Approx(-3.0).margin(1e-6));
    CHECK(r.schedule.values[0] == Catch::Approx(0.0).margin(1e-5));
    CHECK(r.schedule.values[1] == Catch::Approx(1.0).margin(1e-5));
}

TEST_CASE("solve_qp: infeasible equality reports infeasible") {
    QpInstance p = box_qp(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2), 0.0, 1.0);
    p.A_eq = Eigen::MatrixXd::Constant(1, 2, 1.0);
    p.b_eq = Eigen::VectorXd::Constant(1, 5.0);  // unreachable in [0,1]^2
    CHECK(solvers::solve_qp(p, grid_of(2)).status == SolveStatus::infeasible);
}

TEST_CASE("solve_qp matches the refining grid oracle on random instances") {
    Rng rng(307);
    for (int k = 0; k < 40; ++k) {
        int T = 0;
        const QpInstance p = gen::random_qp(rng, T);
        const auto got = solvers::solve_qp(p, grid_of(T));
        REQUIRE(got.status == SolveStatus::optimal);

        auto f = [&](const Eigen::VectorXd& x) {
            return 0.5 * x.dot(p.Q * x) + p.c.dot(x);
        };
        const Eigen::VectorXd lo = Eigen::VectorXd::Constant(T, p.bounds.x_min);
        const Eigen::VectorXd hi = Eigen::VectorXd::Constant(T, p.bounds.x_max);
        const auto want =
            p.A_eq.rows() == 0
                ? oracles::refine_grid_min(f, lo, hi, 1e-3)
                : oracles::refine_grid_min_eq(f, p.A_eq.row(0).transpose(), p.b_eq(0), lo, hi,
                                              1e-3);
        CHECK(got.objective_value <=
              want.objective + 1e-5 * (1.0 + std::abs(want.objective)));
        CHECK(got.objective_value >=
              want.objective - 1e-5 * (1.0 + std::abs(want.objective)));
        CompleteOp op{OpClass::QP, p, grid_of(T), {}};
        CHECK(validate_schedule(got.schedule, op).feasible());
    }
}

TEST_CASE("solve_cp: zero is the unconstrained box minimizer") {
    CpInstance p;
    p.form = {{"kind", "shifted_power_sum"},
              {"offsets", nlohmann::json::array({0.0, 0.0})},
              {"exponent", 2.0}};
    p.objective = build_convex_oracle(p.form);
    p.A_eq = Eigen::MatrixXd(0, 2);
    p.b_eq = Eigen::VectorXd(0);
    p.bounds = {0.0, 3.0};
    const auto r = solvers::solve_cp(p, grid_of(2));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.objective_value == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("solve_cp: cubic damage proxy pushes power to the quiet slot") {
    CpInstance p;
    p.form = {{"kind", "shifted_power_sum"},
              {"offsets", nlohmann::json::array({1.0, 0.0})},
              {"exponent", 3.0}};
    p.objective = build_convex_oracle(p.form);
    p.A_eq = Eigen::MatrixXd::Constant(1, 2, 1.0);
    p.b_eq = Eigen::VectorXd::Constant(1, 1.0);
    p.bounds = {0.0, 1.0};
    const auto r = solvers::solve_cp(p, grid_of(2));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.objective_value == Catch::Approx(2.0).margin(2e-3));
    CHECK(r.schedule.values[0] == Catch::Approx(0.0).margin(1e-3));
    CHECK(r.schedule.values[1] == Catch::Approx(1.0).margin(1e-3));
}

TEST_CASE("solve_cp: symmetric cubic splits the energy evenly") {
    CpInstance p;
    p.form = {{"kind", "shifted_power_sum"},
              {"offsets", nlohmann::json::array({0.0, 0.0})},
              {"exponent", 3.0}};
    p.objective = build_convex_oracle(p.form);
    p.A_eq = Eigen::MatrixXd::Constant(1, 2, 1.0);
    p.b_eq = Eigen::VectorXd::Constant(1, 2.0);
    p.bounds = {0.0, 2.0};
    const auto r = solvers::solve_cp(p, grid_of(2));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.schedule.values[0] == Catch::Approx(1.0).margin(1e-4));
    CHECK(r.schedule.values[1] == Catch::Approx(1.0).margin(1e-4));
}

TEST_CASE("solve_cp: nonlinear inequality oracles steer via feasibility steps") {
    // minimize (x1+0.1)^2 + (x2+0.1)^2 subject to g(x) = 1 - x1 - x2 <= 0:
    // optimum splits the covering constraint evenly at (0.5, 0.5).
    CpInstance p;
    p.objective = {[](const Eigen::VectorXd& x) {
                       return std::pow(x(0) + 0.1, 2.0) + std::pow(x(1) + 0.1, 2.0);
                   },
                   [](const Eigen::VectorXd& x) {
                       return Eigen::VectorXd(2.0 * (x.array() + 0.1).matrix());
                   }};
    p.inequalities.push_back({[](const Eigen::VectorXd& x) { return 1.0 - x(0) - x(1); },
                              [](const Eigen::VectorXd&) {
                                  return Eigen::VectorXd(Eigen::Vector2d(-1.0, -1.0));
                              }});
    p.A_eq = Eigen::MatrixXd(0, 2);
    p.b_eq = Eigen::VectorXd(0);
    p.bounds = {0.0, 1.0};
    const auto r = solvers::solve_cp(p, grid_of(2));
    REQUIRE((r.status == SolveStatus::optimal || r.status == SolveStatus::max_iterations));
    CHECK(r.schedule.values[0] == Catch::Approx(0.5).margin(5e-3));
    CHECK(r.schedule.values[1] == Catch::Approx(0.5).margin(5e-3));
    CHECK(1.0 - r.schedule.values[0] - r.schedule.values[1] <= 1e-6);
}

TEST_CASE("solve_cp matches the refining grid oracle on random instances") {
    Rng rng(409);
    for (int k = 0; k < 30; ++k) {
        int T = 0;
        const gen::RandomCp rc = gen::random_cp(rng, T);
        const auto got = solvers::solve_cp(rc.instance, grid_of(T));
        REQUIRE(got.status == SolveStatus::optimal);
        const Eigen::VectorXd lo = Eigen::VectorXd::Constant(T, rc.instance.bounds.x_min);
        const Eigen::VectorXd hi = Eigen::VectorXd::Constant(T, rc.instance.bounds.x_max);
        const auto want =
            rc.instance.A_eq.rows() == 0
                ? oracles::refine_grid_min(rc.objective, lo, hi, 1e-3)
                : oracles::refine_grid_min_eq(rc.objective, rc.instance.A_eq.row(0).transpose(),
                                              rc.instance.b_eq(0), lo, hi, 1e-3);
        CHECK(std::abs(got.objective_value - want.objective) <=
              1e-3 * (1.0 + std::abs(want.objective)));
    }
}
