#pragma once

// Electrostatic capacitance of a conductor shape, used as the coupling
// strength of each hole. For a sphere the value is closed form; general
// shapes use panel collocation for the equilibrium surface density:
//
//   integral over the surface of sigma(y) / (4 pi |x - y|) ds(y) = 1
//
// at every panel centroid x, with piecewise-constant density. Off-diagonal
// entries use the centroid distance kernel; the diagonal (self) entry is the
// centroid potential of a flat disk of equal area, radius/2 with
// radius = sqrt(area/pi). The capacitance is the total induced charge
// sum_m sigma_m area_m. The dense system is solved by partial-pivot LU;
// hole meshes stay small (a few thousand panels), so direct solves are
// cheaper and more robust than iteration.

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <vector>

#include "tdscat/mesh.hpp"
#include "tdscat/util.hpp"

namespace tdscat {

// Capacitance of a sphere of the given radius: 4 pi r.
inline double capacitance_sphere(double radius) {
    require(radius > 0.0, "capacitance_sphere: radius must be positive");
    return 4.0 * kPi * radius;
}

struct CapacitanceResult {
    double capacitance = 0.0;
    double residual_max = 0.0;       // max |(A sigma)_k - 1| recomputed after the solve
    std::size_t panels = 0;
    bool density_positive = true;    // equilibrium density of a convex body stays positive
    std::vector<double> density;     // per-panel sigma
};

inline CapacitanceResult solve_equilibrium_density(const SurfaceMesh& mesh, int threads = 1) {
    validate_mesh(mesh);
    const std::size_t n = mesh.panel_count();
    std::vector<vec3> cen(n);
    std::vector<double> area(n);
    for (std::size_t t = 0; t < n; ++t) {
        cen[t] = mesh.centroid(t);
        area[t] = mesh.area(t);
    }

    Eigen::MatrixXd A(n, n);
    parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            for (std::size_t m = 0; m < n; ++m) {
                A(k, m) = (k == m) ? 0.5 * std::sqrt(area[k] / kPi)
                                   : area[m] / (4.0 * kPi * dist(cen[k], cen[m]));
            }
        }
    });

    Eigen::VectorXd rhs = Eigen::VectorXd::Ones(n);
    // In-place factorization: A is not needed afterwards, the residual is
    // recomputed matrix-free below.
    Eigen::PartialPivLU<Eigen::Ref<Eigen::MatrixXd>> lu(A);
    Eigen::VectorXd sigma = lu.solve(rhs);

    CapacitanceResult res;
    res.panels = n;
    res.density.assign(sigma.data(), sigma.data() + n);
    double cap = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        cap += res.density[m] * area[m];
        if (res.density[m] <= 0.0) res.density_positive = false;
    }
    res.capacitance = cap;

    std::vector<double> rowerr(n, 0.0);
    parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            double acc = 0.5 * std::sqrt(area[k] / kPi) * res.density[k];
            for (std::size_t m = 0; m < n; ++m) {
                if (m == k) continue;
                acc += area[m] / (4.0 * kPi * dist(cen[k], cen[m])) * res.density[m];
            }
            rowerr[k] = std::abs(acc - 1.0);
        }
    });
    for (std::size_t k = 0; k < n; ++k) res.residual_max = std::max(res.residual_max, rowerr[k]);
    return res;
}

}  // namespace tdscat
