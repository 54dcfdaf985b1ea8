#pragma once

// Field evaluation away from the holes. The scattered field is the
// superposition of retarded monopoles carrying the marched amplitudes,
//
//   u_s(x, t) = sum_j C_j * alpha_j(t - |x - z_j|/c0) / (4 pi |x - z_j|),
//
// and the incident field is the free-space causal monopole at the source.
// Evaluation points must keep a positive distance from every monopole;
// grid evaluation masks points inside an exclusion radius with NaN instead
// of rejecting the whole grid.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdscat/cluster.hpp"
#include "tdscat/geometry.hpp"
#include "tdscat/retarded_system.hpp"
#include "tdscat/util.hpp"

namespace tdscat {

enum class FieldKind { incident, scattered, total };

inline const char* field_kind_name(FieldKind k) {
    switch (k) {
        case FieldKind::incident: return "incident";
        case FieldKind::scattered: return "scattered";
        default: return "total";
    }
}

inline FieldKind field_kind_from_name(const std::string& s) {
    if (s == "incident") return FieldKind::incident;
    if (s == "scattered") return FieldKind::scattered;
    if (s == "total") return FieldKind::total;
    throw std::invalid_argument("unknown field kind: " + s);
}

inline double incident_field(const SourceConfig& source, const vec3& x, double t) {
    const double d = dist(x, source.position);
    require(d > 0.0, "incident_field: evaluation point coincides with the source");
    return source.signal.evaluate(t - d / source.c0) / (4.0 * kPi * d);
}

inline double scattered_field(const RetardedSystem& sys, const SystemSolution& sol, const vec3& x,
                              double t) {
    const std::size_t m = sys.size();
    require(sol.alpha.size() == m, "scattered_field: solution does not match the system");
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double d = dist(x, sys.centers[j]);
        require(d > 0.0, "scattered_field: evaluation point coincides with a hole center");
        acc += sys.capacitances[j] * sol.alpha[j].value(t - d / sys.source.c0, sol.interp) /
               (4.0 * kPi * d);
    }
    return acc;
}

inline double total_field(const RetardedSystem& sys, const SystemSolution& sol, const vec3& x,
                          double t) {
    return incident_field(sys.source, x, t) + scattered_field(sys, sol, x, t);
}

inline double eval_field(const RetardedSystem& sys, const SystemSolution& sol, const vec3& x,
                         double t, FieldKind kind) {
    switch (kind) {
        case FieldKind::incident: return incident_field(sys.source, x, t);
        case FieldKind::scattered: return scattered_field(sys, sol, x, t);
        default: return total_field(sys, sol, x, t);
    }
}

// Leading-order scattered field of one hole with capacitance C0 at z: the
// doubly retarded source pulse, weighted by both free-space kernels.
inline double single_hole_closed_form(double C0, const SourceConfig& source, const vec3& z,
                                      const vec3& x, double t) {
    const double dxz = dist(x, z);
    const double dzs = dist(z, source.position);
    require(dxz > 0.0, "single_hole_closed_form: evaluation point coincides with the hole");
    require(dzs > 0.0, "single_hole_closed_form: hole coincides with the source");
    const double delay = (dxz + dzs) / source.c0;
    return -C0 * source.signal.evaluate(t - delay) / (16.0 * kPi * kPi * dxz * dzs);
}

// Observation points validated against a cluster: every probe must keep at
// least `exclusion` distance from each hole center and from the source.
struct ProbeSet {
    std::vector<vec3> points;
    double exclusion = 0.0;
};

inline double default_exclusion_radius(const Cluster& cluster) {
    return 5.0 * cluster.max_diameter();
}

inline ProbeSet make_probe_set(std::vector<vec3> points, const Cluster& cluster,
                               const SourceConfig& source, double exclusion) {
    require(exclusion > 0.0, "make_probe_set: exclusion radius must be positive");
    require(!points.empty(), "make_probe_set: no probe points");
    for (std::size_t p = 0; p < points.size(); ++p) {
        const double ds = dist(points[p], source.position);
        require(ds >= exclusion, "make_probe_set: probe " + std::to_string(p) +
                                     " is within the exclusion radius of the source (distance " +
                                     fmt_g17(ds) + ")");
        for (std::size_t j = 0; j < cluster.size(); ++j) {
            const double d = dist(points[p], cluster.hole(j).center);
            require(d >= exclusion, "make_probe_set: probe " + std::to_string(p) +
                                        " is within the exclusion radius of hole " +
                                        std::to_string(j) + " (distance " + fmt_g17(d) + ")");
        }
    }
    return ProbeSet{std::move(points), exclusion};
}

// Uniform node lattice over an axis-aligned range. Point ordering is x
// fastest, then y, then z:
// index = (k * ny + j) * nx + i. An axis with a single node sits at the
// center of that axis; only such an axis may be degenerate (lo == hi), which
// is how planar and line grids are expressed.
struct FieldGrid {
    vec3 lo{0.0, 0.0, 0.0};
    vec3 hi{1.0, 1.0, 1.0};
    std::array<std::size_t, 3> counts{2, 2, 2};

    std::size_t point_count() const { return counts[0] * counts[1] * counts[2]; }

    std::vector<vec3> points() const {
        require(counts[0] >= 1 && counts[1] >= 1 && counts[2] >= 1,
                "FieldGrid: node counts must be at least 1");
        auto coord = [&](std::size_t axis, std::size_t k) {
            const double a = (axis == 0) ? lo.x : (axis == 1) ? lo.y : lo.z;
            const double b = (axis == 0) ? hi.x : (axis == 1) ? hi.y : hi.z;
            const std::size_t n = counts[axis];
            require(a <= b, "FieldGrid: lo must not exceed hi");
            if (n == 1) return a + 0.5 * (b - a);
            require(a < b, "FieldGrid: a degenerate axis needs a single node");
            return a + (b - a) * double(k) / double(n - 1);
        };
        std::vector<vec3> pts;
        pts.reserve(point_count());
        for (std::size_t k = 0; k < counts[2]; ++k)
            for (std::size_t j = 0; j < counts[1]; ++j)
                for (std::size_t i = 0; i < counts[0]; ++i)
                    pts.push_back({coord(0, i), coord(1, j), coord(2, k)});
        return pts;
    }
};

// Snapshot evaluation over arbitrary points: one value vector per requested
// time, with points inside the exclusion radius of a hole or the source
// masked as quiet NaN (the mask is time independent, counted once).
struct GridEvalResult {
    std::vector<double> times;
    std::vector<std::vector<double>> values;  // [time][point]
    std::size_t excluded = 0;
};

inline GridEvalResult grid_eval(const RetardedSystem& sys, const SystemSolution& sol,
                                const std::vector<vec3>& points, const std::vector<double>& times,
                                FieldKind kind, double exclusion, int threads = 1) {
    require(exclusion > 0.0, "grid_eval: exclusion radius must be positive");
    require(!points.empty(), "grid_eval: no evaluation points");
    require(!times.empty(), "grid_eval: no evaluation times");

    std::vector<char> masked(points.size(), 0);
    std::size_t excluded = 0;
    for (std::size_t p = 0; p < points.size(); ++p) {
        bool out = dist(points[p], sys.source.position) < exclusion;
        for (std::size_t j = 0; j < sys.size() && !out; ++j)
            out = dist(points[p], sys.centers[j]) < exclusion;
        masked[p] = out ? 1 : 0;
        if (out) ++excluded;
    }

    GridEvalResult res;
    res.times = times;
    res.excluded = excluded;
    res.values.assign(times.size(), std::vector<double>(points.size(), 0.0));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t s = 0; s < times.size(); ++s) {
        auto& row = res.values[s];
        const double t = times[s];
        parallel_for(points.size(), threads, [&](std::size_t b, std::size_t e) {
            for (std::size_t p = b; p < e; ++p)
                row[p] = masked[p] ? nan : eval_field(sys, sol, points[p], t, kind);
        });
    }
    return res;
}

}  // namespace tdscat
