#pragma once

// Hole cluster geometry: positions, shape descriptors, capacitances, and the
// smallness/sparseness diagnostics that decide whether the point-source
// approximation and the retarded solver are trustworthy:
//
//   expansion margin    a * max_i sum_{j != i} d_ij^{-2}        (want < 1)
//   solvability margin  C * max_i sum_{j != i} 1/(4 pi |z_i - z_j|)   (want < 1)
//
// where a is the largest hole diameter, d_ij the surface-to-surface
// separation, and C the largest capacitance. Also the periodic layout
// generator: cells of volume `a` tile the box as a cubic lattice (cell count
// [volume(box)/a], lattice side floor(cbrt of that)), one spherical hole per
// cell center with radius cbar(z) * a / (4 pi), so each hole carries
// capacitance cbar(z) * a.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tdscat/capacitance.hpp"
#include "tdscat/geometry.hpp"
#include "tdscat/mesh.hpp"
#include "tdscat/signal.hpp"
#include "tdscat/util.hpp"

namespace tdscat {

struct SphereShape {
    double radius = 0.0;
};

// A general shape is a mesh in a body frame containing the origin, applied
// at the hole center after uniform scaling.
struct MeshShape {
    SurfaceMesh mesh;
    double scale = 1.0;
};

struct Hole {
    vec3 center;
    std::variant<SphereShape, MeshShape> shape;
    std::optional<double> capacitance;

    double bounding_radius() const {
        if (const auto* s = std::get_if<SphereShape>(&shape)) return s->radius;
        const auto& m = std::get<MeshShape>(shape);
        return m.scale * m.mesh.bounding_radius();
    }

    double diameter() const {
        if (const auto* s = std::get_if<SphereShape>(&shape)) return 2.0 * s->radius;
        const auto& m = std::get<MeshShape>(shape);
        return m.scale * m.mesh.diameter();
    }
};

// Point source emitting a causal signal from a position z* at wave speed c0.
struct SourceConfig {
    vec3 position;
    double c0 = 1.0;
    CausalSignal signal = CausalSignal::smooth_bump();
};

class Cluster {
  public:
    explicit Cluster(std::vector<Hole> holes) : holes_(std::move(holes)) {
        require(!holes_.empty(), "Cluster: at least one hole required");
        for (std::size_t i = 0; i < holes_.size(); ++i) {
            require(std::isfinite(holes_[i].center.x) && std::isfinite(holes_[i].center.y) &&
                        std::isfinite(holes_[i].center.z),
                    "Cluster: hole center must be finite");
            require(holes_[i].bounding_radius() > 0.0, "Cluster: hole has zero size");
            if (holes_[i].capacitance)
                require(*holes_[i].capacitance > 0.0, "Cluster: capacitance must be positive");
        }
        for (std::size_t i = 0; i < holes_.size(); ++i)
            for (std::size_t j = i + 1; j < holes_.size(); ++j)
                require(surface_separation(i, j) > 0.0,
                        "Cluster: holes " + std::to_string(i) + " and " + std::to_string(j) +
                            " overlap or touch");
    }

    std::size_t size() const { return holes_.size(); }
    const std::vector<Hole>& holes() const { return holes_; }
    const Hole& hole(std::size_t i) const { return holes_[i]; }

    void set_capacitance(std::size_t i, double c) {
        require(c > 0.0, "set_capacitance: capacitance must be positive");
        holes_[i].capacitance = c;
    }

    // Largest hole diameter: the smallness parameter of the cluster.
    double max_diameter() const {
        double a = 0.0;
        for (const auto& h : holes_) a = std::max(a, h.diameter());
        return a;
    }

    // Surface-to-surface separation, via bounding radii for mesh shapes
    // (exact for spheres).
    double surface_separation(std::size_t i, std::size_t j) const {
        return dist(holes_[i].center, holes_[j].center) - holes_[i].bounding_radius() -
               holes_[j].bounding_radius();
    }

    // Smallest pairwise separation; +inf for a single hole.
    double min_separation() const {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < holes_.size(); ++i)
            for (std::size_t j = i + 1; j < holes_.size(); ++j)
                d = std::min(d, surface_separation(i, j));
        return d;
    }

    double min_center_distance() const {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < holes_.size(); ++i)
            for (std::size_t j = i + 1; j < holes_.size(); ++j)
                d = std::min(d, dist(holes_[i].center, holes_[j].center));
        return d;
    }

    double expansion_margin() const {
        if (holes_.size() < 2) return 0.0;
        const double a = max_diameter();
        double worst = 0.0;
        for (std::size_t i = 0; i < holes_.size(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < holes_.size(); ++j) {
                if (j == i) continue;
                const double d = surface_separation(i, j);
                s += 1.0 / (d * d);
            }
            worst = std::max(worst, s);
        }
        return a * worst;
    }

    double solvability_margin() const {
        if (holes_.size() < 2) return 0.0;
        double cmax = 0.0;
        for (const auto& h : holes_) {
            require(h.capacitance.has_value(),
                    "solvability_margin: capacitances not computed yet");
            cmax = std::max(cmax, *h.capacitance);
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < holes_.size(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < holes_.size(); ++j) {
                if (j == i) continue;
                s += 1.0 / (4.0 * kPi * dist(holes_[i].center, holes_[j].center));
            }
            worst = std::max(worst, s);
        }
        return cmax * worst;
    }

    // Density exponents of the cluster: hole count M ~ a^{-s} and closest
    // separation d ~ a^{beta}, both measured at the current scale.
    struct RegimeExponents {
        double s = 0.0;
        double beta = 0.0;
    };
    RegimeExponents regime_exponents() const {
        require(holes_.size() >= 2, "regime_exponents: at least two holes required");
        const double a = max_diameter();
        require(a > 0.0 && a < 1.0, "regime_exponents: defined only for diameters in (0, 1)");
        const double la = std::log(1.0 / a);
        RegimeExponents r;
        r.s = std::log(double(holes_.size())) / la;
        r.beta = std::log(1.0 / min_separation()) / la;
        return r;
    }

  private:
    std::vector<Hole> holes_;
};

// Fills in missing capacitances: closed form for spheres, panel solve for
// mesh shapes (on the scaled mesh; capacitance is 1-homogeneous in scale).
inline void fill_capacitances(Cluster& cluster, int threads = 1) {
    for (std::size_t i = 0; i < cluster.size(); ++i) {
        if (cluster.hole(i).capacitance) continue;
        const auto& h = cluster.hole(i);
        if (const auto* s = std::get_if<SphereShape>(&h.shape)) {
            cluster.set_capacitance(i, capacitance_sphere(s->radius));
        } else {
            const auto& m = std::get<MeshShape>(h.shape);
            const auto res = solve_equilibrium_density(scale_mesh(m.mesh, m.scale), threads);
            cluster.set_capacitance(i, res.capacitance);
        }
    }
}

// Periodic layout over a box: the cell count is [volume(box)/a] for cell
// volume a, arranged as the largest cubic lattice n^3 that fits that count;
// one spherical hole sits at each cell center with capacitance cbar(z) * a,
// i.e. radius cbar(z) * a / (4 pi).
inline Cluster periodic_layout(const Box& box, double a,
                               const std::function<double(const vec3&)>& cbar) {
    require(a > 0.0, "periodic_layout: cell volume must be positive");
    const double count = box.volume() / a;
    require(count >= 1.0 - 1e-9, "periodic_layout: cell volume exceeds the box volume");
    const std::size_t cells = std::size_t(count + 1e-9);
    const std::size_t n = std::size_t(std::cbrt(double(cells)) + 1e-9);
    const vec3 sides = box.sides();
    const vec3 pitch = {sides.x / double(n), sides.y / double(n), sides.z / double(n)};
    const double half_min_pitch = 0.5 * std::min({pitch.x, pitch.y, pitch.z});

    std::vector<Hole> holes;
    holes.reserve(n * n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                const vec3 c = {box.lo.x + (double(i) + 0.5) * pitch.x,
                                box.lo.y + (double(j) + 0.5) * pitch.y,
                                box.lo.z + (double(k) + 0.5) * pitch.z};
                const double cb = cbar(c);
                require(cb > 0.0, "periodic_layout: capacitance density must be positive at "
                                  "every occupied cell");
                const double r = cb * a / (4.0 * kPi);
                require(r < half_min_pitch,
                        "periodic_layout: holes would collide, radius " + fmt_g17(r) +
                            " >= half cell side " + fmt_g17(half_min_pitch));
                Hole h;
                h.center = c;
                h.shape = SphereShape{r};
                h.capacitance = cb * a;
                holes.push_back(h);
            }
        }
    }
    return Cluster(std::move(holes));
}

inline Cluster periodic_layout(const Box& box, double a, double cbar) {
    return periodic_layout(box, a, [cbar](const vec3&) { return cbar; });
}

}  // namespace tdscat
