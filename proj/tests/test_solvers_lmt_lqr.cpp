#include <catch2/catch_amalgamated.hpp>

#include "evsched/core/validate.hpp"
#include "evsched/solvers/lmt.hpp"
#include "evsched/solvers/lqr.hpp"
#include "gen_instances.hpp"

using namespace evsched;
using solvers::SolveStatus;

namespace {

TimeGrid grid_of(int T) { return {Timestamp::parse("2024-06-01T00:00"), 1.0, T}; }

LmtInstance scalar_integrator(double s0, double sf, double xmax, int horizon,
                              TerminalMode mode = TerminalMode::at_least) {
    LmtInstance p;
    p.A_dyn = Eigen::MatrixXd::Constant(1, 1, 1.0);
    p.B_dyn = Eigen::MatrixXd::Constant(1, 1, 1.0);
    p.s_init = Eigen::VectorXd::Constant(1, s0);
    p.s_final = Eigen::VectorXd::Constant(1, sf);
    p.s_min = Eigen::VectorXd::Constant(1, 0.0);
    p.s_max = Eigen::VectorXd::Constant(1, 100.0);
    p.bounds = {0.0, xmax};
    p.max_horizon = horizon;
    p.mode = mode;
    return p;
}

LqrInstance scalar_lqr(double s0, double xmin, double xmax, int N) {
    LqrInstance p;
    p.A_dyn = Eigen::MatrixXd::Constant(1, 1, 1.0);
    p.B_dyn = Eigen::MatrixXd::Constant(1, 1, 1.0);
    p.Q_state = Eigen::MatrixXd::Constant(1, 1, 1.0);
    p.Q_final = Eigen::MatrixXd::Constant(1, 1, 1.0);
    p.r = 1.0;
    p.horizon = N;
    p.s0 = Eigen::VectorXd::Constant(1, s0);
    p.bounds = {xmin, xmax};
    return p;
}

}  // namespace

TEST_CASE("solve_lmt: already at the target means tau = 0") {
    const auto r = solvers::solve_lmt(scalar_integrator(5.0, 5.0, 2.0, 8), grid_of(8));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(*r.tau == 0);
    for (double v : r.schedule.values) CHECK(v == 0.0);
}

TEST_CASE("solve_lmt: integrator reaches 5 in 3 steps at full power") {
    const auto r = solvers::solve_lmt(scalar_integrator(0.0, 5.0, 2.0, 8), grid_of(8));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(*r.tau == 3);
    CHECK(r.schedule.values[0] == Catch::Approx(2.0).margin(1e-8));
    CHECK(r.schedule.values[1] == Catch::Approx(2.0).margin(1e-8));
    CHECK(r.schedule.values[2] == Catch::Approx(1.0).margin(1e-8));
    CHECK(r.schedule.values[3] == 0.0);
    REQUIRE(r.trajectory);
    CHECK(r.trajectory->size() == 4);
    CHECK((*r.trajectory)[3](0) == Catch::Approx(5.0).margin(1e-8));
}

TEST_CASE("solve_lmt: target outside the state box is infeasible") {
    LmtInstance p = scalar_integrator(0.0, 5.0, 2.0, 8);
    p.s_max = Eigen::VectorXd::Constant(1, 4.0);
    CHECK(solvers::solve_lmt(p, grid_of(8)).status == SolveStatus::infeasible);
}

TEST_CASE("solve_lmt: exact mode hits the target exactly") {
    const auto r =
        solvers::solve_lmt(scalar_integrator(0.0, 3.0, 2.0, 8, TerminalMode::exact), grid_of(8));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(*r.tau == 2);
    REQUIRE(r.trajectory);
    CHECK(r.trajectory->back()(0) == Catch::Approx(3.0).margin(1e-8));
}

TEST_CASE("solve_lmt agrees with interval reachability; tau-1 infeasible") {
    Rng rng(613);
    int optimal = 0, infeasible = 0;
    for (int k = 0; k < 60; ++k) {
        oracles::ScalarLmt ref{};
        const LmtInstance p = gen::random_lmt(rng, ref);
        const auto got = solvers::solve_lmt(p, grid_of(p.max_horizon));
        const auto want = oracles::interval_reach_min_tau(ref);
        if (!want) {
            ++infeasible;
            CHECK(got.status == SolveStatus::infeasible);
            continue;
        }
        ++optimal;
        REQUIRE(got.status == SolveStatus::optimal);
        CHECK(*got.tau == *want);  // exact horizon match
        CompleteOp op{OpClass::LMT, p, grid_of(p.max_horizon), {}};
        CHECK(validate_schedule(got.schedule, op).feasible());
        if (*want >= 1) {
            oracles::ScalarLmt shorter = ref;
            shorter.max_horizon = *want - 1;
            CHECK_FALSE(oracles::interval_reach_min_tau(shorter));
        }
    }
    CHECK(optimal > 20);
    CHECK(infeasible > 3);
}

TEST_CASE("solve_lqr: regulator at the origin does nothing") {
    const auto r = solvers::solve_lqr(scalar_lqr(0.0, 0.0, 1.0, 4), grid_of(4));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.objective_value == 0.0);
    for (double v : r.schedule.values) CHECK(v == 0.0);
}

TEST_CASE("solve_lqr: one-step scalar case matches calculus") {
    const auto r = solvers::solve_lqr(scalar_lqr(-1.0, 0.0, 1.0, 1), grid_of(1));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.schedule.values[0] == Catch::Approx(0.5).margin(1e-12));
    CHECK(r.objective_value == Catch::Approx(1.5).margin(1e-12));
}

TEST_CASE("solve_lqr: tight input box saturates the policy") {
    const auto r = solvers::solve_lqr(scalar_lqr(-1.0, 0.0, 0.2, 1), grid_of(1));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.schedule.values[0] == Catch::Approx(0.2).margin(1e-12));
}

TEST_CASE("solve_lqr: realized cost equals direct evaluation of the rollout") {
    Rng rng(733);
    oracles::LqDirect ref{};
    const LqrInstance p = gen::random_lqr_interior(rng, ref);
    const auto r = solvers::solve_lqr(p, grid_of(p.horizon));
    REQUIRE(r.status == SolveStatus::optimal);
    REQUIRE(r.trajectory);
    double cost = 0.0;
    for (int t = 0; t < p.horizon; ++t) {
        const Eigen::VectorXd& s = (*r.trajectory)[static_cast<size_t>(t)];
        cost += s.dot(p.Q_state * s) + p.r * r.schedule.values[static_cast<size_t>(t)] *
                                           r.schedule.values[static_cast<size_t>(t)];
    }
    const Eigen::VectorXd& sN = r.trajectory->back();
    cost += sN.dot(p.Q_final * sN);
    CHECK(r.objective_value == Catch::Approx(cost).margin(1e-10));
}

TEST_CASE("solve_lqr matches the normal-equations oracle on interior instances") {
    Rng rng(839);
    for (int k = 0; k < 40; ++k) {
        oracles::LqDirect ref{};
        const LqrInstance p = gen::random_lqr_interior(rng, ref);
        const auto got = solvers::solve_lqr(p, grid_of(p.horizon));
        REQUIRE(got.status == SolveStatus::optimal);
        CHECK(got.objective_value ==
              Catch::Approx(ref.cost).margin(1e-6 * (1.0 + std::abs(ref.cost))));
        for (int t = 0; t < p.horizon; ++t)
            CHECK(got.schedule.values[static_cast<size_t>(t)] ==
                  Catch::Approx(ref.x(t)).margin(1e-6 * (1.0 + std::abs(ref.x(t)))));
    }
}

TEST_CASE("solve_lqr: asymmetric weight matrices raise NumericalFailure") {
    LqrInstance p = scalar_lqr(-1.0, 0.0, 1.0, 1);
    p.Q_state = Eigen::MatrixXd(2, 2);
    p.Q_state << 1.0, 0.5, 0.2, 1.0;
    p.Q_final = Eigen::MatrixXd::Identity(2, 2);
    p.A_dyn = Eigen::MatrixXd::Identity(2, 2);
    p.B_dyn = Eigen::MatrixXd::Constant(2, 1, 1.0);
    p.s0 = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_AS(solvers::solve_lqr(p, grid_of(1)), NumericalFailure);
}
