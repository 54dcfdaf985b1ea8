#pragma once

// Reference solver for one sound-soft sphere, independent of the asymptotic
// point model. The scattered field is a single layer with a density that is
// uniform over the sphere; the Dirichlet data of the oracle problem is the
// incident trace at the sphere center, spread uniformly over the surface:
//
//   u_s|_S (t) = -g(t),   g(t) = lambda(t - d*/c0) / (4 pi d*).
//
// A uniform layer phi produces the uniform surface value
// (c0/2) * int_{t - 2r/c0}^{t} phi, so the boundary condition reduces to a
// delay recursion obtained by differentiation,
//
//   phi(t) = phi(t - 2r/c0) - (2/c0) g'(t),
//
// which is exact at grid nodes when the round trip 2r/c0 is an integer
// number of steps (the only causal solution). The exterior field is the
// distance-weighted window integral
//
//   u_s(x, t) = (r c0 / (2R)) * int_{t-(R+r)/c0}^{t-(R-r)/c0} phi,  R = |x-z|,
//
// evaluated by trace quadrature. Nothing here reuses the point-model code
// paths, so agreement between the two is evidence, not tautology.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "tdscat/cluster.hpp"
#include "tdscat/geometry.hpp"
#include "tdscat/signal.hpp"
#include "tdscat/trace.hpp"
#include "tdscat/util.hpp"

namespace tdscat {

struct OracleConfig {
    vec3 center;
    double radius = 0.0;
    SourceConfig source;
    double horizon = 0.0;  // march phi over [0, horizon]
    int substeps = 4;      // dt = (2 r / c0) / substeps
};

struct SphereOracleSolution {
    vec3 center;
    double radius = 0.0;
    SourceConfig source;
    double dt = 0.0;
    int round_trip_steps = 0;  // 2 r / c0 in units of dt, exact by construction
    Trace phi;

    // Incident trace at the sphere center: the uniform Dirichlet data is -g.
    double rhs(double t) const {
        const double d = dist(center, source.position);
        return source.signal.evaluate(t - d / source.c0) / (4.0 * kPi * d);
    }

    double rhs_derivative(double t) const {
        const double d = dist(center, source.position);
        return source.signal.derivative(t - d / source.c0, 1) / (4.0 * kPi * d);
    }
};

inline SphereOracleSolution solve_uniform_density(const OracleConfig& cfg) {
    require(cfg.radius > 0.0, "sphere oracle: radius must be positive");
    require(cfg.source.c0 > 0.0, "sphere oracle: wave speed must be positive");
    require(cfg.substeps >= 1, "sphere oracle: substeps must be at least 1");
    require(cfg.horizon > 0.0, "sphere oracle: horizon must be positive");
    const double d_star = dist(cfg.center, cfg.source.position);
    require(d_star > cfg.radius, "sphere oracle: source must lie outside the sphere");

    SphereOracleSolution sol;
    sol.center = cfg.center;
    sol.radius = cfg.radius;
    sol.source = cfg.source;
    const double round_trip = 2.0 * cfg.radius / cfg.source.c0;
    sol.dt = round_trip / double(cfg.substeps);
    sol.round_trip_steps = cfg.substeps;

    const std::size_t steps = std::size_t(std::ceil(cfg.horizon / sol.dt - 1e-9));
    const std::size_t m = std::size_t(cfg.substeps);
    std::vector<double> phi(steps + 1, 0.0);
    const double scale = -2.0 / cfg.source.c0;
    for (std::size_t n = 0; n <= steps; ++n) {
        const double prev = (n >= m) ? phi[n - m] : 0.0;
        phi[n] = prev + scale * sol.rhs_derivative(double(n) * sol.dt);
    }
    sol.phi = Trace(0.0, sol.dt, std::move(phi));
    return sol;
}

// Scattered field of the oracle at an exterior point. Queries past the
// marched horizon throw instead of extrapolating.
inline double oracle_exterior_field(const SphereOracleSolution& sol, const vec3& x, double t) {
    const double R = dist(x, sol.center);
    require(R >= sol.radius, "sphere oracle: evaluation point inside the sphere");
    const double c0 = sol.source.c0;
    const double lo = t - (R + sol.radius) / c0;
    const double hi = t - (R - sol.radius) / c0;
    return (sol.radius * c0 / (2.0 * R)) * trace_integral(sol.phi, lo, hi);
}

// A-posteriori check that the marched density reproduces the boundary data:
// the largest defect of (c0/2) * window integral + g over `checks` times
// spread across the horizon. Quadrature-limited, O(dt^2).
inline double oracle_boundary_residual(const SphereOracleSolution& sol, int checks = 256) {
    require(checks >= 2, "sphere oracle: need at least two check times");
    const double c0 = sol.source.c0;
    const double delta = 2.0 * sol.radius / c0;
    const double T = sol.phi.t_end();
    double worst = 0.0;
    for (int k = 0; k < checks; ++k) {
        const double t = T * double(k) / double(checks - 1);
        const double surface = 0.5 * c0 * trace_integral(sol.phi, t - delta, t);
        worst = std::max(worst, std::abs(surface + sol.rhs(t)));
    }
    return worst;
}

// Radius sweep against the leading-order point model: for each radius the
// sphere problem is solved by the oracle, the point model is evaluated in
// closed form with capacitance 4 pi r, and the largest pointwise difference
// over the requested times is recorded together with the log-log slope.
struct OracleComparison {
    std::vector<double> radii;
    std::vector<double> errors;
    double slope = 0.0;
};

inline OracleComparison compare_with_asymptotic(const vec3& center, const SourceConfig& source,
                                                const vec3& x, const std::vector<double>& times,
                                                const std::vector<double>& radii,
                                                int substeps = 4) {
    require(!times.empty(), "oracle comparison: no evaluation times");
    require(!radii.empty(), "oracle comparison: no radii");
    double horizon = 0.0;
    for (double t : times) {
        require(t >= 0.0, "oracle comparison: negative evaluation time");
        horizon = std::max(horizon, t);
    }
    require(horizon > 0.0, "oracle comparison: horizon must be positive");

    OracleComparison cmp;
    cmp.radii = radii;
    for (double r : radii) {
        OracleConfig cfg;
        cfg.center = center;
        cfg.radius = r;
        cfg.source = source;
        cfg.horizon = horizon;
        cfg.substeps = substeps;
        const auto sol = solve_uniform_density(cfg);
        const double C0 = capacitance_sphere(r);
        double err = 0.0;
        for (double t : times) {
            const double uo = oracle_exterior_field(sol, x, t);
            const double dxz = dist(x, center);
            const double dzs = dist(center, source.position);
            const double uc = -C0 * source.signal.evaluate(t - (dxz + dzs) / source.c0) /
                              (16.0 * kPi * kPi * dxz * dzs);
            err = std::max(err, std::abs(uo - uc));
        }
        cmp.errors.push_back(err);
    }
    cmp.slope = fit_loglog_slope(cmp.radii, cmp.errors);
    return cmp;
}

}  // namespace tdscat
