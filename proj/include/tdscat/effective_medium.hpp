#pragma once

// Homogenized volume model: instead of discrete holes, a capacitance
// density cbar(x) over a box. The unknown amplitude density W obeys
//
//   W(x,t) + int_Omega cbar(y) W(y, t - |x-y|/c0) / (4 pi |x-y|) dy = f(x,t)
//
// with f the negated incident field. Collocation on cubic voxels of edge h
// turns the integral into cross-voxel terms cbar_n h^3 / (4 pi d_mn) with
// delay d_mn / c0, plus an instantaneous self term: the own-voxel integral
// of the static kernel over the volume-equivalent ball,
//
//   w_self = cbar_m * r_v^2 / 2,   r_v = (3 h^3 / (4 pi))^{1/3}.
//
// With dt <= h / c0 every cross coupling is retarded by at least one step,
// so the march is explicit: each step solves (1 + w_self) W_m = rhs.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tdscat/fields.hpp"
#include "tdscat/geometry.hpp"
#include "tdscat/trace.hpp"
#include "tdscat/util.hpp"

namespace tdscat {

struct VoxelGrid {
    Box box;
    std::array<std::size_t, 3> counts{1, 1, 1};
    double h = 0.0;  // common voxel edge

    // Voxels must be cubes: the box sides divided by the counts must agree.
    static VoxelGrid regular(const Box& box, std::size_t nx, std::size_t ny, std::size_t nz) {
        require(nx >= 1 && ny >= 1 && nz >= 1, "VoxelGrid: counts must be at least 1");
        const vec3 s = box.sides();
        const double hx = s.x / double(nx), hy = s.y / double(ny), hz = s.z / double(nz);
        require(std::abs(hx - hy) <= 1e-12 * hx && std::abs(hx - hz) <= 1e-12 * hx,
                "VoxelGrid: voxels must be cubic (box sides / counts must agree)");
        VoxelGrid g;
        g.box = box;
        g.counts = {nx, ny, nz};
        g.h = hx;
        return g;
    }

    std::size_t voxel_count() const { return counts[0] * counts[1] * counts[2]; }

    // Flat ordering is x fastest, then y, then z (same as FieldGrid).
    std::size_t flat(std::size_t i, std::size_t j, std::size_t k) const {
        return (k * counts[1] + j) * counts[0] + i;
    }

    vec3 center(std::size_t i, std::size_t j, std::size_t k) const {
        return {box.lo.x + (double(i) + 0.5) * h, box.lo.y + (double(j) + 0.5) * h,
                box.lo.z + (double(k) + 0.5) * h};
    }

    vec3 center_flat(std::size_t m) const {
        const std::size_t i = m % counts[0];
        const std::size_t j = (m / counts[0]) % counts[1];
        const std::size_t k = m / (counts[0] * counts[1]);
        return center(i, j, k);
    }

    double voxel_volume() const { return h * h * h; }
};

// Radius of the ball with one voxel's volume.
inline double equivalent_radius(double h) {
    require(h > 0.0, "equivalent_radius: voxel edge must be positive");
    return std::cbrt(3.0 * h * h * h / (4.0 * kPi));
}

// Samples a density field at the voxel centers.
inline std::vector<double> sample_cbar(const VoxelGrid& grid,
                                       const std::function<double(vec3)>& cbar) {
    std::vector<double> out(grid.voxel_count());
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = cbar(grid.center_flat(m));
    return out;
}

struct MediumOptions {
    Interp interp = Interp::cubic;
    int threads = 1;
    bool early_out = true;  // skip lookups whose stencil is provably all zero
};

struct MediumSolution {
    VoxelGrid grid;
    std::vector<double> cbar;
    SourceConfig source;
    double dt = 0.0;
    std::size_t steps = 0;
    Interp interp = Interp::cubic;
    std::vector<Trace> W;  // one amplitude-density trace per voxel

    double forcing(std::size_t m, double t) const {
        const double d = dist(grid.center_flat(m), source.position);
        return -source.signal.evaluate(t - d / source.c0) / (4.0 * kPi * d);
    }
};

namespace detail {

// Pair distances depend only on the integer offset between voxels, so one
// table over offset space replaces the M^2 distance matrix.
struct OffsetTable {
    std::array<std::size_t, 3> counts;
    std::vector<double> d;

    explicit OffsetTable(const VoxelGrid& g) : counts(g.counts) {
        const std::size_t sx = 2 * counts[0] - 1, sy = 2 * counts[1] - 1, sz = 2 * counts[2] - 1;
        d.resize(sx * sy * sz);
        for (std::size_t a = 0; a < sx; ++a)
            for (std::size_t b = 0; b < sy; ++b)
                for (std::size_t c = 0; c < sz; ++c) {
                    const double di = double(a) - double(counts[0] - 1);
                    const double dj = double(b) - double(counts[1] - 1);
                    const double dk = double(c) - double(counts[2] - 1);
                    d[(a * sy + b) * sz + c] = g.h * std::sqrt(di * di + dj * dj + dk * dk);
                }
    }

    double operator()(std::size_t i1, std::size_t j1, std::size_t k1, std::size_t i2,
                      std::size_t j2, std::size_t k2) const {
        const std::size_t sy = 2 * counts[1] - 1, sz = 2 * counts[2] - 1;
        const std::size_t a = i1 - i2 + counts[0] - 1;
        const std::size_t b = j1 - j2 + counts[1] - 1;
        const std::size_t c = k1 - k2 + counts[2] - 1;
        return d[(a * sy + b) * sz + c];
    }
};

}  // namespace detail

inline MediumSolution march_volume(const VoxelGrid& grid, std::vector<double> cbar,
                                   const SourceConfig& source, double T, double dt,
                                   const MediumOptions& opts = {}) {
    const std::size_t M = grid.voxel_count();
    require(cbar.size() == M, "march_volume: one density value per voxel required");
    for (double c : cbar) require(c >= 0.0, "march_volume: densities must be nonnegative");
    require(source.c0 > 0.0, "march_volume: wave speed must be positive");
    require(T > 0.0, "march_volume: horizon must be positive");
    require(dt > 0.0 && dt < T, "march_volume: dt must lie in (0, T)");
    require(dt <= grid.h / source.c0 * (1.0 + 1e-12),
            "march_volume: dt must not exceed h/c0, otherwise cross-voxel couplings "
            "reach into the current step");

    MediumSolution med;
    med.grid = grid;
    med.cbar = std::move(cbar);
    med.source = source;
    med.dt = dt;
    med.interp = opts.interp;
    med.steps = std::size_t(std::ceil(T / dt - 1e-9));

    for (std::size_t m = 0; m < M; ++m)
        require(dist(grid.center_flat(m), source.position) > 0.0,
                "march_volume: source coincides with a voxel center");

    const double rv = equivalent_radius(grid.h);
    const double vol = grid.voxel_volume();
    std::vector<double> self(M), strength(M);
    for (std::size_t m = 0; m < M; ++m) {
        self[m] = med.cbar[m] * rv * rv / 2.0;
        strength[m] = med.cbar[m] * vol;  // cross-coupling numerator cbar_n h^3
    }

    const detail::OffsetTable dists(grid);
    const std::size_t N = med.steps;
    std::vector<std::vector<double>> W(M, std::vector<double>(N + 1, 0.0));
    // First sample index at which a voxel trace is nonzero; lookups whose
    // whole interpolation stencil lies before it contribute exactly zero
    // (the skip is bitwise equivalent to evaluating the interpolant).
    const std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> first_nz(M, kNone);

    const std::size_t nx = grid.counts[0], ny = grid.counts[1], nz = grid.counts[2];
    for (std::size_t n = 0; n <= N; ++n) {
        const double t = double(n) * dt;
        parallel_for(M, opts.threads, [&](std::size_t mb, std::size_t me) {
            for (std::size_t m = mb; m < me; ++m) {
                const std::size_t im = m % nx, jm = (m / nx) % ny, km = m / (nx * ny);
                double acc = med.forcing(m, t);
                std::size_t p = 0;
                for (std::size_t k = 0; k < nz; ++k)
                    for (std::size_t j = 0; j < ny; ++j)
                        for (std::size_t i = 0; i < nx; ++i, ++p) {
                            if (p == m || strength[p] == 0.0) continue;
                            const double d = dists(im, jm, km, i, j, k);
                            const double q = t - d / source.c0;
                            if (opts.early_out) {
                                if (first_nz[p] == kNone) continue;
                                if (q < (double(first_nz[p]) - 3.0) * dt) continue;
                            }
                            acc -= strength[p] / (4.0 * kPi * d) *
                                   detail::interp_uniform(W[p].data(), n, 0.0, dt, q, opts.interp);
                        }
                W[m][n] = acc / (1.0 + self[m]);
            }
        });
        for (std::size_t m = 0; m < M; ++m)
            if (W[m][n] != 0.0 && first_nz[m] == kNone) first_nz[m] = n;
    }

    med.W.reserve(M);
    for (std::size_t m = 0; m < M; ++m) med.W.emplace_back(0.0, dt, std::move(W[m]));
    return med;
}

// Largest defect of the discrete volume equations, replaying the marcher's
// lookup rule (all cross couplings read strictly earlier samples).
inline double residual_volume(const MediumSolution& med) {
    const std::size_t M = med.grid.voxel_count();
    const detail::OffsetTable dists(med.grid);
    const double rv = equivalent_radius(med.grid.h);
    const double vol = med.grid.voxel_volume();
    const std::size_t nx = med.grid.counts[0], ny = med.grid.counts[1], nz = med.grid.counts[2];
    double worst = 0.0;
    for (std::size_t n = 0; n <= med.steps; ++n) {
        const double t = double(n) * med.dt;
        for (std::size_t m = 0; m < M; ++m) {
            const std::size_t im = m % nx, jm = (m / nx) % ny, km = m / (nx * ny);
            const double self = med.cbar[m] * rv * rv / 2.0;
            double acc = (1.0 + self) * med.W[m].samples[n] - med.forcing(m, t);
            std::size_t p = 0;
            for (std::size_t k = 0; k < nz; ++k)
                for (std::size_t j = 0; j < ny; ++j)
                    for (std::size_t i = 0; i < nx; ++i, ++p) {
                        if (p == m || med.cbar[p] == 0.0) continue;
                        const double d = dists(im, jm, km, i, j, k);
                        acc += med.cbar[p] * vol / (4.0 * kPi * d) *
                               med.W[p].value_prefix(t - d / med.source.c0, n, med.interp);
                    }
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

// Scattered field of the medium at an exterior point: the volume analog of
// the cluster superposition, with voxel strength cbar_m h^3.
inline double medium_scattered_field(const MediumSolution& med, const vec3& x, double t) {
    const double vol = med.grid.voxel_volume();
    double acc = 0.0;
    for (std::size_t m = 0; m < med.W.size(); ++m) {
        if (med.cbar[m] == 0.0) continue;
        const double d = dist(x, med.grid.center_flat(m));
        require(d > 0.0, "medium_scattered_field: evaluation point on a voxel center");
        acc += med.cbar[m] * vol * med.W[m].value(t - d / med.source.c0, med.interp) /
               (4.0 * kPi * d);
    }
    return acc;
}

inline double medium_total_field(const MediumSolution& med, const vec3& x, double t) {
    return incident_field(med.source, x, t) + medium_scattered_field(med, x, t);
}

// Side-by-side evaluation of a marched hole cluster and a marched medium at
// common probes and times. The capacitance provenance sums say whether the
// two really describe the same material: sum_i C_i versus int cbar dV.
struct MediumComparison {
    double cluster_capacitance_sum = 0.0;
    double medium_capacitance_integral = 0.0;
    std::vector<double> probe_max_diff;
    double max_diff = 0.0;
    double field_scale = 0.0;  // largest |cluster field| seen, for relative reporting
};

inline MediumComparison compare_cluster_vs_medium(const RetardedSystem& sys,
                                                  const SystemSolution& sol,
                                                  const MediumSolution& med,
                                                  const std::vector<vec3>& probes,
                                                  const std::vector<double>& times) {
    require(!probes.empty(), "compare_cluster_vs_medium: no probes");
    require(!times.empty(), "compare_cluster_vs_medium: no times");
    MediumComparison cmp;
    for (double c : sys.capacitances) cmp.cluster_capacitance_sum += c;
    const double vol = med.grid.voxel_volume();
    for (double c : med.cbar) cmp.medium_capacitance_integral += c * vol;
    for (const auto& p : probes) {
        double worst = 0.0;
        for (double t : times) {
            const double uc = scattered_field(sys, sol, p, t);
            const double um = medium_scattered_field(med, p, t);
            worst = std::max(worst, std::abs(uc - um));
            cmp.field_scale = std::max(cmp.field_scale, std::abs(uc));
        }
        cmp.probe_max_diff.push_back(worst);
        cmp.max_diff = std::max(cmp.max_diff, worst);
    }
    return cmp;
}

}  // namespace tdscat
