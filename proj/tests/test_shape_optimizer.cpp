#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "newtondrag/errors.hpp"
#include "newtondrag/functionals.hpp"
#include "newtondrag/radial_solver.hpp"
#include "newtondrag/shape_optimizer.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>

using namespace newtondrag;
using doctest::Approx;

constexpr double pi = std::numbers::pi;

namespace {

OptimizeConfig small_config(int pieces = 6, long budget = 3000, int restarts = 3) {
    OptimizeConfig c;
    c.pieces = pieces;
    c.budget = budget;
    c.restarts = restarts;
    c.mesh_h = 0.08;
    c.seed = 17;
    return c;
}

}  // namespace

TEST_CASE("config validation and records") {
    OptimizeConfig c;
    CHECK_NOTHROW(c.validate());
    c.pieces = 3;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.budget = 10;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.step_decay = 1.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.penalty_schedule = {};
    CHECK_THROWS_AS(c.validate(), InvalidArgument);

    OptimizeConfig d = small_config();
    CHECK(config_to_json(config_from_json(config_to_json(d))) == config_to_json(d));
    CHECK_THROWS_AS(config_from_json({{"pieces", "many"}}), InvalidArgument);
    CHECK(config_from_json({{"restarts", 7}}).restarts == 7);
}

TEST_CASE("contradictory constraint data is infeasible") {
    const Domain disk = make_disk(1.0);
    CHECK_THROWS_AS(search_cap(disk, ConstraintSpec::volume_bound(4.0), 1.0), Infeasible);
    CHECK_THROWS_AS(search_cap(disk, ConstraintSpec::surface_bound(3.0), {}), Infeasible);
    CHECK_THROWS_AS(search_cap(disk, ConstraintSpec::min_lift(0.5 * pi, {1.0, 0.0}, 1.0), {}), Infeasible);
    CHECK(search_cap(disk, ConstraintSpec::volume_bound(1.0), {}) == Approx(3.0 / pi));
    CHECK(search_cap(disk, ConstraintSpec::surface_bound(2.0 * pi), {}) == Approx(2.0));
    CHECK(search_cap(disk, ConstraintSpec::height_bound(2.0), 1.5) == 1.5);
    CHECK_THROWS_AS(optimize(disk, ConstraintSpec::volume_bound(4.0), Objective::newton(), small_config(), 1.0),
                    Infeasible);
}

TEST_CASE("height-constrained optimisation on the square") {
    const Domain sq = testing::unit_square();
    const auto r = optimize(sq, ConstraintSpec::height_bound(1.0), Objective::newton(), small_config());
    CHECK(r.admissibility.feasible);
    CHECK(r.admissibility.max_height <= 1.0 + 1e-9);
    CHECK(r.admissibility.min_height >= -1e-9);
    CHECK(r.objective < sq.measure());  // beats the flat body
    CHECK(r.objective > 0.0);
    CHECK(r.restarts.size() == 3);
    CHECK_FALSE(r.radial_baseline.has_value());
    double sum = 0.0;
    for (double f : r.histogram.fractions) sum += f;
    CHECK(sum == Approx(1.0).epsilon(1e-9));
    CHECK(r.objective == Approx(newton_resistance(r.profile, build_mesh(sq, 0.08))).epsilon(1e-12));

    // traces are monotone and bounded by the budget
    for (const auto& t : r.restarts) {
        CHECK(t.evaluations <= 3000);
        for (std::size_t i = 1; i < t.trace.size(); ++i) {
            CHECK(t.trace[i].best_objective <= t.trace[i - 1].best_objective);
            CHECK(t.trace[i].eval >= t.trace[i - 1].eval);
        }
    }
    const auto j = report_to_json(r);
    CHECK(j.at("restarts").size() == 3);
    CHECK(j.at("radial_baseline").is_null());
}

TEST_CASE("volume and surface constraints are respected") {
    const Domain disk = make_disk(1.0);
    const auto v = optimize(disk, ConstraintSpec::volume_bound(1.0), Objective::newton(), small_config());
    CHECK(v.admissibility.feasible);
    CHECK(v.admissibility.slack >= -1e-6);
    CHECK(v.objective < pi);

    const auto s = optimize(disk, ConstraintSpec::surface_bound(5.0), Objective::newton(), small_config());
    CHECK(s.admissibility.feasible);
    CHECK(s.admissibility.slack >= -1e-6);
}

TEST_CASE("lift constraint") {
    const Domain disk = make_disk(1.0);
    const auto r =
        optimize(disk, ConstraintSpec::min_lift(0.3, {1.0, 0.0}, 1.0), Objective::newton(), small_config());
    CHECK(r.admissibility.feasible);
    CHECK(lift(r.profile, build_mesh(disk, 0.08), {1.0, 0.0}) >= 0.3 - 1e-6);
}

TEST_CASE("results do not depend on the thread count") {
    const Domain disk = make_disk(1.0);
    OptimizeConfig a = small_config(4, 2000, 3);
    OptimizeConfig b = a;
    a.threads = 1;
    b.threads = 3;
    const auto ra = optimize(disk, ConstraintSpec::height_bound(1.5), Objective::newton(), a);
    const auto rb = optimize(disk, ConstraintSpec::height_bound(1.5), Objective::newton(), b);
    CHECK(report_to_json(ra).dump() == report_to_json(rb).dump());
    CHECK(ra.radial_baseline.has_value());
}

TEST_CASE("generic objective") {
    const Domain disk = make_disk(1.0);
    const Objective obj = Objective::generic("weighted", [](Vec2 x, double, Vec2 g) {
        return (1.0 + norm2(x)) / (1.0 + norm2(g));
    });
    const auto r = optimize(disk, ConstraintSpec::height_bound(1.0), obj, small_config());
    CHECK(r.objective_name == "weighted");
    CHECK_FALSE(r.radial_baseline.has_value());
    CHECK(r.objective == Approx(generic_functional(r.profile, build_mesh(disk, 0.08), obj.phi)).epsilon(1e-12));
    CHECK(r.objective < 1.5 * pi);
}

TEST_CASE("discrete radial optimisation recovers the closed form") {
    OptimizeConfig c;
    c.restarts = 4;
    c.budget = 20000;
    for (double M : {0.5, 1.0, 2.0}) {
        const auto d = optimize_radial_discrete(M, 1.0, 400, c);
        const RadialOptimum opt = radial_optimum(M, 1.0);
        CHECK(d.objective == Approx(opt.resistance).epsilon(5e-3));
        CHECK(d.objective >= opt.resistance * (1.0 - 1e-6));
        for (std::size_t i = 1; i < d.slopes.size(); ++i) CHECK(d.slopes[i] >= d.slopes[i - 1] - 1e-12);
        // no area with slopes strictly between ε and 1−ε
        CHECK(d.histogram.fractions[1] < 1e-9);
    }
    const auto flat = optimize_radial_discrete(1e-6, 1.0, 64, c);
    CHECK(flat.objective == Approx(pi).epsilon(1e-5));
    CHECK_THROWS_AS(optimize_radial_discrete(1.0, 1.0, 4, c), InvalidArgument);
}

TEST_CASE("verification of radial inputs") {
    const RadialOptimum opt = radial_optimum(1.0, 1.0);
    const auto v = verify_optimum(opt);
    CHECK(v.plateau_fraction == Approx(opt.r0 * opt.r0).epsilon(1e-12));
    CHECK(v.dichotomy_fraction == 0.0);
    REQUIRE(v.min_hessian_det.has_value());
    CHECK(*v.min_hessian_det > 0.0);

    // the slope-0.5 cone sits entirely inside the forbidden band
    const auto cone = ConcaveProfile::radial({0.0, 1.0}, {0.5, 0.0});
    const auto vc = verify_optimum(cone, build_mesh(make_disk(1.0), 0.05));
    CHECK(vc.dichotomy_fraction == Approx(1.0).epsilon(1e-6));
    CHECK(verification_to_json(vc).at("dichotomy_fraction").get<double>() == vc.dichotomy_fraction);
}

TEST_CASE("verification of polyhedral inputs") {
    const Domain sq = testing::unit_square();
    const Mesh m = build_mesh(sq, 0.05);
    // four steep faces meeting a plateau
    std::vector<AffinePiece> pieces;
    for (Vec2 n : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}}) pieces.push_back({-2.0 * n, 2.0});
    const auto p = ConcaveProfile::polyhedral(sq, pieces, 1.0);
    const auto v = verify_optimum(p, m);
    CHECK(v.hessian_structural);
    CHECK(v.dichotomy_fraction == 0.0);
    CHECK(v.plateau_fraction == Approx(0.25).epsilon(0.05));
    CHECK(v.excluded_fraction > 0.0);
    CHECK(v.excluded_fraction < 0.3);
}

TEST_CASE("degenerate sequences") {
    const auto rows = degenerate_sweep(make_disk(1.0), 1.0, {1, 4, 16}, 0.01);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        REQUIRE(row.steep_cone_exact.has_value());
        CHECK(row.steep_cone == Approx(*row.steep_cone_exact).epsilon(2e-3));
        if (row.n >= 4) {
            CHECK_FALSE(row.oscillating_concave);
            CHECK(row.oscillation_violation > 0.0);
        }
    }
    // steep cones drive the resistance toward zero
    CHECK(rows.back().steep_cone < rows.front().steep_cone / 50.0);

    const auto square = degenerate_sweep(testing::unit_square(), 1.0, {8}, 0.02);
    CHECK_FALSE(square[0].steep_cone_exact.has_value());
    CHECK(square[0].steep_cone < 4.0 / 50.0);
}

TEST_CASE("non-radial shapes beat the radial optimum on a tall disk") {
    OptimizeConfig c;
    c.pieces = 16;
    c.budget = 20000;
    c.restarts = 4;
    c.seed = 1;
    c.mesh_h = 0.04;
    const auto r = optimize(make_disk(1.0), ConstraintSpec::height_bound(2.0), Objective::newton(), c);
    REQUIRE(r.radial_baseline.has_value());
    CHECK(r.admissibility.feasible);
    CHECK(r.objective < *r.radial_baseline);
}
