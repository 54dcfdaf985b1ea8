#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tdscat/fields.hpp"
#include "tdscat/util.hpp"

using namespace tdscat;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Hole sphere_hole(const vec3& c, double r) { return Hole{c, SphereShape{r}, std::nullopt}; }

SourceConfig axial_source() { return SourceConfig{{0.15, 0.0, 0.0}}; }

Cluster pair_cluster() {
    Cluster cl({sphere_hole({0.0, 0.0, 0.0}, 0.01), sphere_hole({0.5, 0.0, 0.0}, 0.01)});
    fill_capacitances(cl);
    return cl;
}

struct Marched {
    RetardedSystem sys;
    SystemSolution sol;
};

Marched single_hole_run() {
    Cluster cl({sphere_hole({0.1, 0.0, 0.0}, 0.005)});
    fill_capacitances(cl);
    auto sys = assemble(cl, axial_source());
    auto sol = march(sys, 1.0, 0.01);
    return {std::move(sys), std::move(sol)};
}

}  // namespace

TEST_CASE("incident field matches frozen monopole values and is causal") {
    const auto src = axial_source();
    CHECK_THAT(incident_field(src, {0.3, 0.0, 0.0}, 1.15),
               WithinRel(0.19516610508106386897, 1e-13));
    CHECK_THAT(incident_field(src, {0.1, 0.0, 0.0}, 1.0),
               WithinRel(0.52554197559610446496, 1e-13));
    for (double t : {-1.0, 0.0, 0.1, 0.15})
        CHECK(incident_field(src, {0.3, 0.0, 0.0}, t) == 0.0);
    CHECK_THROWS_AS(incident_field(src, src.position, 0.5), std::invalid_argument);
}

TEST_CASE("single-hole scattered field reproduces the closed form at nodes") {
    const auto run = single_hole_run();
    const vec3 x{0.3, 0.0, 0.0};  // distance 0.2 from the hole
    // Node-aligned retarded time: interpolation returns the stored sample,
    // and the marched amplitude is the forcing itself, so the superposition
    // collapses to the closed form up to round-off.
    for (double t : {0.45, 0.75, 0.95}) {
        const double got = scattered_field(run.sys, run.sol, x, t);
        const double want =
            single_hole_closed_form(run.sys.capacitances[0], run.sys.source, {0.1, 0.0, 0.0}, x, t);
        CHECK_THAT(got, WithinRel(want, 1e-12));
    }
    CHECK_THROWS_AS(scattered_field(run.sys, run.sol, {0.1, 0.0, 0.0}, 0.5),
                    std::invalid_argument);
}

TEST_CASE("scattered amplitude decays as one over distance at fixed retarded time") {
    const auto run = single_hole_run();
    const vec3 x1{0.3, 0.0, 0.0};   // R1 = 0.2
    const vec3 x2{0.5, 0.0, 0.0};   // R2 = 0.4
    const double t1 = 0.83;
    const double t2 = t1 + 0.2;     // same retarded time t - R/c0
    const double u1 = scattered_field(run.sys, run.sol, x1, t1);
    const double u2 = scattered_field(run.sys, run.sol, x2, t2);
    REQUIRE(u1 != 0.0);
    CHECK_THAT(u2 * 2.0, WithinRel(u1, 1e-12));
}

TEST_CASE("total field is the sum of incident and scattered") {
    const auto run = single_hole_run();
    const vec3 x{0.25, 0.1, 0.0};
    for (double t : {0.4, 0.8}) {
        const double inc = incident_field(run.sys.source, x, t);
        const double sca = scattered_field(run.sys, run.sol, x, t);
        CHECK(total_field(run.sys, run.sol, x, t) == inc + sca);
        CHECK(eval_field(run.sys, run.sol, x, t, FieldKind::total) == inc + sca);
        CHECK(eval_field(run.sys, run.sol, x, t, FieldKind::incident) == inc);
        CHECK(eval_field(run.sys, run.sol, x, t, FieldKind::scattered) == sca);
    }
}

TEST_CASE("scattered lookups beyond the marched horizon throw") {
    const auto run = single_hole_run();
    CHECK_THROWS_AS(scattered_field(run.sys, run.sol, {0.3, 0.0, 0.0}, 5.0), std::out_of_range);
}

TEST_CASE("field kind names round-trip") {
    for (FieldKind k : {FieldKind::incident, FieldKind::scattered, FieldKind::total})
        CHECK(field_kind_from_name(field_kind_name(k)) == k);
    CHECK_THROWS_AS(field_kind_from_name("pressure"), std::invalid_argument);
}

TEST_CASE("probe sets enforce the exclusion radius") {
    const auto cl = pair_cluster();
    const auto src = axial_source();
    CHECK(default_exclusion_radius(cl) == 0.1);  // five hole diameters

    auto ok = make_probe_set({{0.3, 0.0, 0.0}, {0.0, 0.2, 0.0}}, cl, src, 0.1);
    CHECK(ok.points.size() == 2);
    CHECK(ok.exclusion == 0.1);

    // Too close to hole 0, to hole 1, and to the source, respectively.
    CHECK_THROWS_AS(make_probe_set({{0.05, 0.0, 0.0}}, cl, src, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_probe_set({{0.5, 0.09, 0.0}}, cl, src, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_probe_set({{0.15, 0.05, 0.0}}, cl, src, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_probe_set({{0.3, 0.0, 0.0}}, cl, src, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_probe_set({}, cl, src, 0.1), std::invalid_argument);
}

TEST_CASE("field grid generates the documented lattice ordering") {
    FieldGrid g;
    g.lo = {0.0, 0.0, 0.0};
    g.hi = {1.0, 2.0, 3.0};
    g.counts = {3, 2, 1};
    const auto pts = g.points();
    REQUIRE(pts.size() == 6);
    // x fastest, then y; the single-node z axis sits at the box center.
    CHECK(pts[0].x == 0.0);
    CHECK(pts[1].x == 0.5);
    CHECK(pts[2].x == 1.0);
    CHECK(pts[0].y == 0.0);
    CHECK(pts[3].y == 2.0);
    for (const auto& p : pts) CHECK(p.z == 1.5);

    FieldGrid center;
    center.lo = {-1.0, -1.0, -1.0};
    center.hi = {1.0, 1.0, 1.0};
    center.counts = {1, 1, 1};
    const auto cpts = center.points();
    REQUIRE(cpts.size() == 1);
    CHECK(cpts[0].x == 0.0);
    CHECK(cpts[0].y == 0.0);
    CHECK(cpts[0].z == 0.0);

    FieldGrid plane;
    plane.lo = {0.0, 0.0, 0.5};
    plane.hi = {1.0, 1.0, 0.5};
    plane.counts = {2, 2, 1};
    const auto ppts = plane.points();
    REQUIRE(ppts.size() == 4);
    for (const auto& p : ppts) CHECK(p.z == 0.5);

    FieldGrid bad = plane;
    bad.counts = {2, 2, 2};
    CHECK_THROWS_AS(bad.points(), std::invalid_argument);
}

TEST_CASE("grid evaluation masks excluded points with NaN and counts them") {
    const auto cl = pair_cluster();
    const auto sys = assemble(cl, axial_source());
    const auto sol = march(sys, 1.2, 0.01);

    // Three collinear points: on hole 0, clear of everything, near the source.
    const std::vector<vec3> pts = {{0.0, 0.0, 0.0}, {0.25, 0.3, 0.0}, {0.15, 0.01, 0.0}};
    const std::vector<double> times = {0.5, 0.9};
    const auto res = grid_eval(sys, sol, pts, times, FieldKind::total, 0.05);
    REQUIRE(res.values.size() == 2);
    REQUIRE(res.values[0].size() == 3);
    CHECK(res.excluded == 2);
    CHECK(res.times == times);
    for (std::size_t s = 0; s < 2; ++s) {
        CHECK(std::isnan(res.values[s][0]));
        CHECK(std::isnan(res.values[s][2]));
        CHECK(res.values[s][1] == eval_field(sys, sol, pts[1], times[s], FieldKind::total));
    }

    const auto threaded = grid_eval(sys, sol, pts, times, FieldKind::total, 0.05, 3);
    CHECK(threaded.excluded == res.excluded);
    for (std::size_t s = 0; s < 2; ++s)
        CHECK(threaded.values[s][1] == res.values[s][1]);

    CHECK_THROWS_AS(grid_eval(sys, sol, {}, times, FieldKind::total, 0.05),
                    std::invalid_argument);
    CHECK_THROWS_AS(grid_eval(sys, sol, pts, {}, FieldKind::total, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(grid_eval(sys, sol, pts, times, FieldKind::total, 0.0),
                    std::invalid_argument);
}
