#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tdscat/capacitance.hpp"
#include "tdscat/mesh.hpp"
#include "tdscat/util.hpp"

using namespace tdscat;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("sphere capacitance closed form") {
    CHECK_THAT(capacitance_sphere(0.01), WithinRel(0.12566370614359172, 1e-15));
    CHECK_THAT(capacitance_sphere(1.0), WithinRel(12.566370614359172, 1e-15));
    CHECK_THAT(capacitance_sphere(0.0055), WithinRel(0.069115038378975451, 1e-15));
    CHECK_THROWS_AS(capacitance_sphere(0.0), std::invalid_argument);
    CHECK_THROWS_AS(capacitance_sphere(-1.0), std::invalid_argument);
}

TEST_CASE("icosphere construction") {
    for (int level : {0, 1, 2, 3}) {
        const SurfaceMesh m = icosphere(level);
        CHECK(m.panel_count() == std::size_t(20) << (2 * level));
        CHECK_NOTHROW(validate_mesh(m));
        for (const auto& v : m.vertices) CHECK_THAT(norm(v), WithinRel(1.0, 1e-14));
    }
    // Total panel area approaches the sphere area from below.
    const double a2 = icosphere(2).total_area();
    const double a3 = icosphere(3).total_area();
    CHECK(a2 < a3);
    CHECK(a3 < 4.0 * kPi);
    CHECK_THAT(a3, WithinRel(4.0 * kPi, 5e-3));
    CHECK_THAT(icosphere(1).diameter(), WithinRel(2.0, 1e-12));
}

TEST_CASE("mesh validation rejects broken surfaces") {
    SurfaceMesh open_mesh = icosphere(1);
    open_mesh.triangles.pop_back();
    CHECK_THROWS_AS(validate_mesh(open_mesh), std::invalid_argument);

    SurfaceMesh flipped = icosphere(1);
    std::swap(flipped.triangles[0][0], flipped.triangles[0][1]);
    CHECK_THROWS_AS(validate_mesh(flipped), std::invalid_argument);

    SurfaceMesh degenerate = icosphere(1);
    degenerate.triangles[0][1] = degenerate.triangles[0][0];
    CHECK_THROWS_AS(validate_mesh(degenerate), std::invalid_argument);

    SurfaceMesh bad_index = icosphere(1);
    bad_index.triangles[0][2] = 10000;
    CHECK_THROWS_AS(validate_mesh(bad_index), std::invalid_argument);
}

// Independent check of the collocation operator: the equilibrium density of
// the unit sphere is identically 1, and the potential of a uniform unit
// density equals 1 at and inside the surface. Applying the panel operator to
// the constant-one vector must therefore reproduce 1 up to quadrature error,
// which shrinks under refinement. The kernel sum here is written out
// independently of the library assembly.
static double apply_operator_to_ones(const SurfaceMesh& m) {
    const std::size_t n = m.panel_count();
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.5 * std::sqrt(m.area(k) / kPi);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == k) continue;
            acc += m.area(j) / (4.0 * kPi * dist(m.centroid(k), m.centroid(j)));
        }
        worst = std::max(worst, std::abs(acc - 1.0));
    }
    return worst;
}

TEST_CASE("collocation operator reproduces the uniform sphere potential") {
    const double e2 = apply_operator_to_ones(icosphere(2));
    const double e3 = apply_operator_to_ones(icosphere(3));
    CHECK(e3 < e2);
    CHECK(e3 < 0.05);
}

TEST_CASE("unit sphere equilibrium density and capacitance") {
    const auto res = solve_equilibrium_density(icosphere(3));
    CHECK(res.panels == 1280);
    CHECK(res.density_positive);
    CHECK(res.residual_max < 1e-10);
    double worst = 0.0;
    for (double s : res.density) worst = std::max(worst, std::abs(s - 1.0));
    CHECK(worst < 0.1);
    CHECK_THAT(res.capacitance, WithinRel(4.0 * kPi, 0.02));
}

TEST_CASE("capacitance converges under refinement at first order or better") {
    std::vector<double> h, err;
    for (int level : {1, 2, 3}) {
        const auto res = solve_equilibrium_density(icosphere(level));
        h.push_back(std::pow(0.5, level));
        err.push_back(std::abs(res.capacitance - 4.0 * kPi));
    }
    CHECK(err[0] > err[1]);
    CHECK(err[1] > err[2]);
    CHECK(fit_loglog_slope(h, err) > 0.9);
}

TEST_CASE("capacitance is 1-homogeneous under scaling") {
    const SurfaceMesh m = icosphere(2);
    const double c1 = solve_equilibrium_density(m).capacitance;
    const double c2 = solve_equilibrium_density(scale_mesh(m, 0.37)).capacitance;
    CHECK_THAT(c2, WithinRel(0.37 * c1, 1e-12));
    const double c3 = solve_equilibrium_density(scale_mesh(m, 1e-3)).capacitance;
    CHECK_THAT(c3, WithinRel(1e-3 * c1, 1e-12));
}

TEST_CASE("capacitance is translation invariant") {
    const SurfaceMesh m = icosphere(2);
    const double c1 = solve_equilibrium_density(m).capacitance;
    const double c2 = solve_equilibrium_density(translate_mesh(m, {1.0, -2.0, 3.0})).capacitance;
    CHECK_THAT(c2, WithinRel(c1, 1e-10));
}

TEST_CASE("assembly parallelization does not change the result") {
    const SurfaceMesh m = icosphere(2);
    const auto r1 = solve_equilibrium_density(m, 1);
    const auto r2 = solve_equilibrium_density(m, 4);
    CHECK(r1.capacitance == r2.capacitance);
}

TEST_CASE("mesh serialization round trip") {
    const SurfaceMesh m = icosphere(1);
    const SurfaceMesh back = parse_mesh(serialize_mesh(m));
    REQUIRE(back.vertices.size() == m.vertices.size());
    REQUIRE(back.triangles.size() == m.triangles.size());
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
        CHECK(back.vertices[i].x == m.vertices[i].x);
        CHECK(back.vertices[i].y == m.vertices[i].y);
        CHECK(back.vertices[i].z == m.vertices[i].z);
    }
    CHECK(back.triangles == m.triangles);
    CHECK_THROWS_AS(parse_mesh("not a mesh"), std::invalid_argument);
    CHECK_THROWS_AS(parse_mesh("4 4\n0 0 0\n"), std::invalid_argument);
}
