#include <catch2/catch_amalgamated.hpp>

#include "evsched/core/validate.hpp"
#include "evsched/solvers/lp.hpp"
#include "evsched/solvers/mm.hpp"
#include "gen_instances.hpp"

using namespace evsched;
using solvers::SolveStatus;

namespace {

TimeGrid grid_of(int T) { return {Timestamp::parse("2024-06-01T00:00"), 1.0, T}; }

LpInstance cover_lp(const Eigen::VectorXd& c, double need, double x_max) {
    LpInstance p;
    p.c = c;
    p.A = Eigen::MatrixXd::Constant(1, c.size(), -1.0);
    p.b = Eigen::VectorXd::Constant(1, -need);
    p.A_eq = Eigen::MatrixXd(0, c.size());
    p.b_eq = Eigen::VectorXd(0);
    p.bounds = {0.0, x_max};
    return p;
}

}  // namespace

TEST_CASE("solve_lp: price-sorted fill example") {
    const auto r = solvers::solve_lp(cover_lp(Eigen::Vector3d(3, 1, 2), 0.8, 0.5), grid_of(3));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.objective_value == Catch::Approx(1.1).margin(1e-9));
    CHECK(r.schedule.values[0] == Catch::Approx(0.0).margin(1e-9));
    CHECK(r.schedule.values[1] == Catch::Approx(0.5).margin(1e-9));
    CHECK(r.schedule.values[2] == Catch::Approx(0.3).margin(1e-9));
}

TEST_CASE("solve_lp: zero cost gives zero objective") {
    const auto r =
        solvers::solve_lp(cover_lp(Eigen::VectorXd::Zero(3), 0.8, 0.5), grid_of(3));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.objective_value == 0.0);
}

TEST_CASE("solve_lp: capacity shortfall is infeasible") {
    const auto r =
        solvers::solve_lp(cover_lp(Eigen::Vector3d(1, 1, 1), 0.8, 0.2), grid_of(3));
    CHECK(r.status == SolveStatus::infeasible);
}

TEST_CASE("solve_lp: scaling c by lambda > 0 keeps the argmin, scales the objective") {
    Rng rng(23);
    for (int k = 0; k < 40; ++k) {
        int T = 0;
        LpInstance p = gen::random_lp(rng, T);
        const auto r1 = solvers::solve_lp(p, grid_of(T));
        const double lambda = rng.pick(std::vector<double>{2.0, 10.0, 0.5});
        LpInstance scaled = p;
        scaled.c = lambda * p.c;
        const auto r2 = solvers::solve_lp(scaled, grid_of(T));
        REQUIRE(r1.status == r2.status);
        if (r1.status != SolveStatus::optimal) continue;
        CHECK(r1.schedule.values == r2.schedule.values);  // bit-identical pivots
        CHECK(r2.objective_value == Catch::Approx(lambda * r1.objective_value).margin(1e-9));
    }
}

TEST_CASE("solve_lp: deterministic across repeated runs") {
    Rng rng(5);
    int T = 0;
    const LpInstance p = gen::random_lp(rng, T);
    const auto a = solvers::solve_lp(p, grid_of(T));
    const auto b = solvers::solve_lp(p, grid_of(T));
    CHECK(a.status == b.status);
    CHECK(a.schedule.values == b.schedule.values);
    CHECK(a.objective_value == b.objective_value);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("solve_lp matches vertex enumeration on random instances") {
    Rng rng(101);
    int feasible = 0, infeasible = 0;
    for (int k = 0; k < 60; ++k) {
        int T = 0;
        const LpInstance p = gen::random_lp(rng, T);
        const auto got = solvers::solve_lp(p, grid_of(T));
        const auto want = oracles::vertex_enumerate_min(p.c, gen::poly_of_lp(p, T));
        if (!want) {
            ++infeasible;
            CHECK(got.status == SolveStatus::infeasible);
            continue;
        }
        ++feasible;
        REQUIRE(got.status == SolveStatus::optimal);
        CHECK(got.objective_value ==
              Catch::Approx(want->objective).margin(1e-6 * (1.0 + std::abs(want->objective))));
        CompleteOp op{OpClass::LP, p, grid_of(T), {}};
        CHECK(validate_schedule(got.schedule, op).feasible());
    }
    CHECK(feasible > 20);
    CHECK(infeasible > 0);
}

TEST_CASE("solve_mm: uniform fill under symmetric peak shaving") {
    const int T = 4;
    MmInstance p;
    p.F = Eigen::MatrixXd::Identity(T, T);
    p.g = Eigen::VectorXd::Zero(T);
    p.A = Eigen::MatrixXd::Constant(1, T, -1.0);
    p.b = Eigen::VectorXd::Constant(1, -2.0);  // sum x >= 2 with dt = 1
    p.A_eq = Eigen::MatrixXd(0, T);
    p.b_eq = Eigen::VectorXd(0);
    p.bounds = {0.0, 5.0};
    const auto r = solvers::solve_mm(p, grid_of(T));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.objective_value == Catch::Approx(0.5).margin(1e-9));
    for (double v : r.schedule.values) CHECK(v == Catch::Approx(0.5).margin(1e-8));
}

TEST_CASE("solve_mm: offsets steer power to the quiet slot") {
    MmInstance p;
    p.F = Eigen::MatrixXd::Identity(2, 2);
    p.g = Eigen::Vector2d(1.0, 0.0);
    p.A = Eigen::MatrixXd::Constant(1, 2, -1.0);
    p.b = Eigen::VectorXd::Constant(1, -1.0);
    p.A_eq = Eigen::MatrixXd(0, 2);
    p.b_eq = Eigen::VectorXd(0);
    p.bounds = {0.0, 1.0};
    const auto r = solvers::solve_mm(p, grid_of(2));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.objective_value == Catch::Approx(1.0).margin(1e-9));
    CHECK(r.schedule.values[0] == Catch::Approx(0.0).margin(1e-8));
    CHECK(r.schedule.values[1] == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("solve_mm: water-filling level on the two-slot example") {
    MmInstance p;
    p.F = Eigen::MatrixXd::Identity(2, 2);
    p.g = Eigen::Vector2d(1.0, 0.0);
    p.A = Eigen::MatrixXd::Constant(1, 2, -1.0);
    p.b = Eigen::VectorXd::Constant(1, -2.0);
    p.A_eq = Eigen::MatrixXd(0, 2);
    p.b_eq = Eigen::VectorXd(0);
    p.bounds = {0.0, 2.0};
    const auto r = solvers::solve_mm(p, grid_of(2));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.objective_value == Catch::Approx(1.5).margin(1e-9));
    CHECK(r.schedule.values[0] == Catch::Approx(0.5).margin(1e-8));
    CHECK(r.schedule.values[1] == Catch::Approx(1.5).margin(1e-8));
    CHECK(oracles::water_fill_peak({1.0, 0.0}, 2.0, 1.0) == Catch::Approx(1.5).margin(1e-9));
}

TEST_CASE("solve_mm matches epigraph vertex enumeration on random instances") {
    Rng rng(211);
    int feasible = 0;
    for (int k = 0; k < 60; ++k) {
        int T = 0;
        const MmInstance p = gen::random_mm(rng, T);
        const auto got = solvers::solve_mm(p, grid_of(T));
        Eigen::VectorXd c = Eigen::VectorXd::Zero(T + 1);
        c(T) = 1.0;
        const auto want = oracles::vertex_enumerate_min(c, gen::poly_of_mm_epigraph(p, T));
        if (!want) {
            CHECK(got.status == SolveStatus::infeasible);
            continue;
        }
        ++feasible;
        REQUIRE(got.status == SolveStatus::optimal);
        CHECK(got.objective_value ==
              Catch::Approx(want->objective).margin(1e-6 * (1.0 + std::abs(want->objective))));

        // epigraph consistency: the reported objective IS the recomputed max
        const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(
            got.schedule.values.data(), static_cast<Eigen::Index>(got.schedule.values.size()));
        CHECK(got.objective_value == (p.F * x + p.g).maxCoeff());
        CompleteOp op{OpClass::MM, p, grid_of(T), {}};
        CHECK(validate_schedule(got.schedule, op).feasible());
    }
    CHECK(feasible > 30);
}
