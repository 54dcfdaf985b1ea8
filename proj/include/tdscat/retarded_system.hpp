#pragma once

// Retarded point-interaction system for the hole amplitudes alpha_i(t):
//
//   alpha_i(t) + sum_{j != i} C_j * alpha_j(t - |z_i - z_j|/c0) / (4 pi |z_i - z_j|)
//     = -lambda(t - |z_i - z*|/c0) / (4 pi |z_i - z*|)
//
// marched on a uniform causal grid. Retarded lookups of the discrete
// equation at step n read only samples that exist at step n: pairs with
// delay >= dt read the first n samples (strictly earlier), pairs with delay
// < dt couple into the current step and are resolved by Jacobi fixed-point
// iteration, which contracts whenever the solvability margin is below 1.
// The residual operation replays the same lookup rule, so explicit steps
// reproduce the equations to round-off.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdscat/cluster.hpp"
#include "tdscat/geometry.hpp"
#include "tdscat/trace.hpp"
#include "tdscat/util.hpp"

namespace tdscat {

struct RetardedSystem {
    std::vector<vec3> centers;
    std::vector<double> capacitances;
    SourceConfig source;
    std::vector<double> tau;      // pair delays, row-major M x M, diagonal 0
    std::vector<double> weight;   // C_j / (4 pi |z_i - z_j|), row-major, diagonal 0
    std::vector<double> src_tau;  // |z_i - z*| / c0
    std::vector<double> src_gain; // 1 / (4 pi |z_i - z*|)
    double margin = 0.0;          // solvability margin of the generating cluster

    std::size_t size() const { return centers.size(); }

    double min_delay() const {
        const std::size_t m = size();
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (i != j) d = std::min(d, tau[i * m + j]);
        return d;
    }

    // Right-hand side: the negated incident field at hole i.
    double forcing(std::size_t i, double t) const {
        return -src_gain[i] * source.signal.evaluate(t - src_tau[i]);
    }

    double forcing_derivative(std::size_t i, double t) const {
        return -src_gain[i] * source.signal.derivative(t - src_tau[i], 1);
    }
};

inline RetardedSystem assemble(const Cluster& cluster, const SourceConfig& source) {
    require(source.c0 > 0.0, "assemble: wave speed must be positive");
    const std::size_t m = cluster.size();
    RetardedSystem sys;
    sys.source = source;
    sys.centers.resize(m);
    sys.capacitances.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        require(cluster.hole(i).capacitance.has_value(),
                "assemble: hole " + std::to_string(i) + " has no capacitance yet");
        sys.centers[i] = cluster.hole(i).center;
        sys.capacitances[i] = *cluster.hole(i).capacitance;
    }
    sys.tau.assign(m * m, 0.0);
    sys.weight.assign(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            const double d = dist(sys.centers[i], sys.centers[j]);
            require(d > 0.0, "assemble: coincident hole centers");
            sys.tau[i * m + j] = d / source.c0;
            sys.weight[i * m + j] = sys.capacitances[j] / (4.0 * kPi * d);
        }
    }
    sys.src_tau.resize(m);
    sys.src_gain.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double d = dist(sys.centers[i], source.position);
        require(d > 0.0, "assemble: source coincides with a hole center");
        sys.src_tau[i] = d / source.c0;
        sys.src_gain[i] = 1.0 / (4.0 * kPi * d);
    }
    sys.margin = cluster.solvability_margin();
    return sys;
}

struct MarchOptions {
    Interp interp = Interp::cubic;
    double tol = 1e-10;       // fixed-point stop: successive change <= tol
    int max_iterations = 200; // per step
    bool force = false;       // march despite margin >= 1
    int threads = 1;
};

struct SystemSolution {
    double dt = 0.0;
    std::size_t steps = 0;  // samples per trace = steps + 1 (grid 0..T)
    Interp interp = Interp::cubic;
    std::vector<Trace> alpha;
    bool converged = true;
    std::size_t failed_step = 0;    // meaningful when !converged
    std::vector<int> iterations;    // per-step fixed-point iterations (0 = explicit)
};

inline SystemSolution march(const RetardedSystem& sys, double T, double dt,
                            const MarchOptions& opts = {}) {
    require(T > 0.0, "march: horizon must be positive");
    require(dt > 0.0 && dt < T, "march: dt must lie in (0, T)");
    require(opts.tol > 0.0, "march: tolerance must be positive");
    if (sys.margin >= 1.0 && !opts.force) {
        throw std::runtime_error(
            "march: solvability margin " + fmt_g17(sys.margin) +
            " >= 1, the fixed-point coupling is not a contraction (use force to override)");
    }

    const std::size_t m = sys.size();
    const std::size_t steps = std::size_t(std::ceil(T / dt - 1e-9));
    std::vector<std::vector<double>> a(m, std::vector<double>(steps + 1, 0.0));

    // Pairs with delay below dt couple into the current step.
    std::vector<std::vector<std::size_t>> slow(m), fast(m);
    bool any_fast = false;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            if (sys.tau[i * m + j] >= dt) {
                slow[i].push_back(j);
            } else {
                fast[i].push_back(j);
                any_fast = true;
            }
        }
    }

    SystemSolution sol;
    sol.dt = dt;
    sol.steps = steps;
    sol.interp = opts.interp;
    sol.iterations.assign(steps + 1, 0);

    std::vector<double> base(m), next(m);
    for (std::size_t n = 0; n <= steps; ++n) {
        const double t = double(n) * dt;
        parallel_for(m, opts.threads, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                double acc = sys.forcing(i, t);
                for (std::size_t j : slow[i]) {
                    const double q = t - sys.tau[i * m + j];
                    acc -= sys.weight[i * m + j] *
                           detail::interp_uniform(a[j].data(), n, 0.0, dt, q, opts.interp);
                }
                base[i] = acc;
            }
        });
        if (!any_fast) {
            for (std::size_t i = 0; i < m; ++i) a[i][n] = base[i];
            continue;
        }

        // Jacobi iteration over the current-step unknowns.
        for (std::size_t i = 0; i < m; ++i) a[i][n] = (n > 0) ? a[i][n - 1] : 0.0;
        bool done = false;
        for (int it = 1; it <= opts.max_iterations; ++it) {
            parallel_for(m, opts.threads, [&](std::size_t b, std::size_t e) {
                for (std::size_t i = b; i < e; ++i) {
                    double acc = base[i];
                    for (std::size_t j : fast[i]) {
                        const double q = t - sys.tau[i * m + j];
                        acc -= sys.weight[i * m + j] *
                               detail::interp_uniform(a[j].data(), n + 1, 0.0, dt, q, opts.interp);
                    }
                    next[i] = acc;
                }
            });
            double delta = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                delta = std::max(delta, std::abs(next[i] - a[i][n]));
                a[i][n] = next[i];
            }
            sol.iterations[n] = it;
            if (delta <= opts.tol) {
                done = true;
                break;
            }
        }
        if (!done) {
            sol.converged = false;
            sol.failed_step = n;
            break;
        }
    }

    sol.alpha.reserve(m);
    for (std::size_t i = 0; i < m; ++i) sol.alpha.emplace_back(0.0, dt, std::move(a[i]));
    return sol;
}

// Largest absolute defect of the discrete equations over all holes and
// steps, replaying exactly the causal lookup rule the marcher used.
inline double residual(const RetardedSystem& sys, const SystemSolution& sol) {
    const std::size_t m = sys.size();
    require(sol.alpha.size() == m, "residual: solution does not match the system");
    require(sol.converged || sol.failed_step > 0, "residual: no completed steps");
    const double dt = sol.dt;
    const std::size_t last = sol.converged ? sol.steps : sol.failed_step - 1;
    double worst = 0.0;
    for (std::size_t n = 0; n <= last; ++n) {
        const double t = double(n) * dt;
        for (std::size_t i = 0; i < m; ++i) {
            double acc = sol.alpha[i].samples[n] - sys.forcing(i, t);
            for (std::size_t j = 0; j < m; ++j) {
                if (j == i) continue;
                const double tau = sys.tau[i * m + j];
                const std::size_t avail = (tau >= dt) ? n : n + 1;
                acc += sys.weight[i * m + j] *
                       sol.alpha[j].value_prefix(t - tau, avail, sol.interp);
            }
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

// Discrete energy bound: the root-sum-square of the amplitudes at every time
// must stay below (1 - margin)^{-1} * sqrt(sum_i ||f_i||_{H1}^2), with the
// forcing norms taken over the marched window by trapezoid quadrature.
struct StabilityReport {
    double worst_ratio = 0.0;
    double bound = 0.0;  // the right-hand side
    bool ok = false;
};

inline StabilityReport stability_check(const RetardedSystem& sys, const SystemSolution& sol) {
    require(sys.margin < 1.0, "stability_check: bound requires margin < 1");
    const std::size_t m = sys.size();
    require(sol.alpha.size() == m, "stability_check: solution does not match the system");
    const double dt = sol.dt;
    const std::size_t N = sol.alpha[0].samples.size() - 1;

    double h1sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        for (std::size_t n = 0; n <= N; ++n) {
            const double t = double(n) * dt;
            const double f = sys.forcing(i, t);
            const double fp = sys.forcing_derivative(i, t);
            const double w = (n == 0 || n == N) ? 0.5 : 1.0;
            acc += w * (f * f + fp * fp);
        }
        h1sq += acc * dt;
    }

    StabilityReport rep;
    rep.bound = std::sqrt(h1sq) / (1.0 - sys.margin);
    for (std::size_t n = 0; n <= N; ++n) {
        double ss = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double v = sol.alpha[i].samples[n];
            ss += v * v;
        }
        rep.worst_ratio = std::max(rep.worst_ratio, std::sqrt(ss) / rep.bound);
    }
    rep.ok = rep.worst_ratio <= 1.0;
    return rep;
}

}  // namespace tdscat
