#pragma once

// Perforation design: the correspondence between a desired mass-density
// profile rho(x) over a cube, the auxiliary pressure factor p = rho^{-1/2},
// and the capacitance density cbar that realizes it with small holes:
//
//   rho <-> p  pointwise (p = rho^{-1/2}, rho = p^{-2}), p forced to 1 on
//              the boundary node layer,
//   p -> cbar  via cbar = lap_h p / p (7-point stencil); p must stay
//              positive and discretely subharmonic, since an absorbing
//              perforation cannot produce negative capacitance,
//   cbar -> p  the auxiliary elliptic solve -lap_h p + cbar p = 0 with
//              p = 1 on the boundary, done matrix-free by conjugate
//              gradients on the substitution p = 1 + q (SPD, rhs -cbar),
//   cbar -> holes  a periodic layout whose per-cell capacitance samples the
//              field at cell centers.
//
// The same-grid roundtrip cbar -> solve_p -> cbar_from_p is algebraic: both
// directions use the identical stencil, so the recovery error is the CG
// residual divided by p, not a discretization error. Truncation shows up
// only when a field enters or leaves the grid (analytic p sampled onto
// nodes, restriction between grids), and is O(h^2) there.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdscat/cluster.hpp"
#include "tdscat/geometry.hpp"
#include "tdscat/util.hpp"

namespace tdscat {

// Scalar samples at the nodes of a uniform cubic lattice, boundary nodes
// included: (n+1)^3 values over n cells per axis, x fastest.
struct NodeField {
    Box box;
    std::size_t n = 0;
    std::vector<double> values;

    NodeField() = default;
    NodeField(const Box& box_, std::size_t n_, std::vector<double> values_)
        : box(box_), n(n_), values(std::move(values_)) {
        require(n >= 2, "NodeField: need at least 2 cells per axis");
        const vec3 s = box.sides();
        require(std::abs(s.x - s.y) <= 1e-12 * s.x && std::abs(s.x - s.z) <= 1e-12 * s.x,
                "NodeField: box must be a cube");
        require(values.size() == node_count(), "NodeField: value count does not match the grid");
    }

    std::size_t nodes_per_axis() const { return n + 1; }
    std::size_t node_count() const { return (n + 1) * (n + 1) * (n + 1); }
    double spacing() const { return box.sides().x / double(n); }

    std::size_t idx(std::size_t i, std::size_t j, std::size_t k) const {
        return (k * (n + 1) + j) * (n + 1) + i;
    }

    vec3 node(std::size_t i, std::size_t j, std::size_t k) const {
        const double h = spacing();
        return {box.lo.x + double(i) * h, box.lo.y + double(j) * h, box.lo.z + double(k) * h};
    }

    bool is_boundary(std::size_t i, std::size_t j, std::size_t k) const {
        return i == 0 || j == 0 || k == 0 || i == n || j == n || k == n;
    }

    double trilinear(const vec3& x) const {
        const double h = spacing();
        const double slack = 1e-9 * box.sides().x;
        require(box.contains(x, slack), "NodeField: sample point outside the box");
        auto cell = [&](double c, double lo) {
            double u = (c - lo) / h;
            if (u < 0.0) u = 0.0;
            double fi = std::floor(u);
            if (fi > double(n - 1)) fi = double(n - 1);
            return std::pair<std::size_t, double>(std::size_t(fi), u - fi);
        };
        const auto [i, fx] = cell(x.x, box.lo.x);
        const auto [j, fy] = cell(x.y, box.lo.y);
        const auto [k, fz] = cell(x.z, box.lo.z);
        double acc = 0.0;
        for (int dk = 0; dk <= 1; ++dk)
            for (int dj = 0; dj <= 1; ++dj)
                for (int di = 0; di <= 1; ++di) {
                    const double w = (di ? fx : 1.0 - fx) * (dj ? fy : 1.0 - fy) *
                                     (dk ? fz : 1.0 - fz);
                    acc += w * values[idx(i + di, j + dj, k + dk)];
                }
        return acc;
    }
};

inline NodeField make_node_field(const Box& box, std::size_t n,
                                 const std::function<double(vec3)>& f) {
    std::vector<double> v((n + 1) * (n + 1) * (n + 1));
    NodeField field(box, n, std::move(v));
    for (std::size_t k = 0; k <= n; ++k)
        for (std::size_t j = 0; j <= n; ++j)
            for (std::size_t i = 0; i <= n; ++i)
                field.values[field.idx(i, j, k)] = f(field.node(i, j, k));
    return field;
}

// Coarse nodes coincide with every `factor`-th fine node; values are copied,
// not averaged, so restriction is exact on grid functions.
inline NodeField restrict_field(const NodeField& fine, std::size_t factor) {
    require(factor >= 1, "restrict_field: factor must be at least 1");
    require(fine.n % factor == 0, "restrict_field: factor must divide the cell count");
    const std::size_t nc = fine.n / factor;
    require(nc >= 2, "restrict_field: coarse grid needs at least 2 cells per axis");
    NodeField coarse(fine.box, nc, std::vector<double>((nc + 1) * (nc + 1) * (nc + 1)));
    for (std::size_t k = 0; k <= nc; ++k)
        for (std::size_t j = 0; j <= nc; ++j)
            for (std::size_t i = 0; i <= nc; ++i)
                coarse.values[coarse.idx(i, j, k)] =
                    fine.values[fine.idx(i * factor, j * factor, k * factor)];
    return coarse;
}

// Pressure factor from a mass-density profile: p = rho^{-1/2} at every node,
// then the boundary layer is forced to the background value 1. The largest
// value overwritten that way is reported so a caller can tell whether the
// profile already blended to background at the walls.
struct PressureResult {
    NodeField p;
    double boundary_adjustment = 0.0;
};

inline PressureResult p_from_rho(const NodeField& rho) {
    for (double v : rho.values) require(v > 0.0, "p_from_rho: density must be positive");
    PressureResult out;
    out.p = NodeField(rho.box, rho.n, std::vector<double>(rho.values.size()));
    for (std::size_t i = 0; i < rho.values.size(); ++i)
        out.p.values[i] = 1.0 / std::sqrt(rho.values[i]);
    const std::size_t n = rho.n;
    for (std::size_t k = 0; k <= n; ++k)
        for (std::size_t j = 0; j <= n; ++j)
            for (std::size_t i = 0; i <= n; ++i)
                if (out.p.is_boundary(i, j, k)) {
                    const std::size_t id = out.p.idx(i, j, k);
                    out.boundary_adjustment =
                        std::max(out.boundary_adjustment, std::abs(out.p.values[id] - 1.0));
                    out.p.values[id] = 1.0;
                }
    return out;
}

// Inverse of p_from_rho away from the forced boundary layer.
inline NodeField rho_from_p(const NodeField& p) {
    for (double v : p.values) require(v > 0.0, "rho_from_p: pressure must be positive");
    NodeField rho(p.box, p.n, std::vector<double>(p.values.size()));
    for (std::size_t i = 0; i < p.values.size(); ++i)
        rho.values[i] = 1.0 / (p.values[i] * p.values[i]);
    return rho;
}

// Capacitance density cbar = lap_h p / p at interior nodes. p must be
// positive everywhere and discretely subharmonic: an interior node with
// lap_h p < -lap_tolerance is an error naming that node, and dips within
// the tolerance clamp to zero. Boundary nodes replicate their nearest
// interior value so the field can be sampled up to the walls.
inline NodeField cbar_from_p(const NodeField& p, double lap_tolerance = 1e-12) {
    require(lap_tolerance >= 0.0, "cbar_from_p: tolerance must be nonnegative");
    for (double v : p.values) require(v > 0.0, "cbar_from_p: pressure must be positive everywhere");
    const std::size_t n = p.n;
    const double h = p.spacing();

    std::vector<double> lap(p.values.size(), 0.0);
    double worst = 0.0;
    std::size_t wi = 0, wj = 0, wk = 0;
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t j = 1; j < n; ++j)
            for (std::size_t i = 1; i < n; ++i) {
                const double nb = p.values[p.idx(i - 1, j, k)] + p.values[p.idx(i + 1, j, k)] +
                                  p.values[p.idx(i, j - 1, k)] + p.values[p.idx(i, j + 1, k)] +
                                  p.values[p.idx(i, j, k - 1)] + p.values[p.idx(i, j, k + 1)];
                const double v = (nb - 6.0 * p.values[p.idx(i, j, k)]) / (h * h);
                lap[p.idx(i, j, k)] = v;
                if (v < worst) {
                    worst = v;
                    wi = i, wj = j, wk = k;
                }
            }
    if (worst < -lap_tolerance)
        throw std::invalid_argument(
            "cbar_from_p: pressure is not discretely subharmonic; worst node (" +
            std::to_string(wi) + ", " + std::to_string(wj) + ", " + std::to_string(wk) +
            ") has lap_h p = " + fmt_g17(worst) + ", tolerance " + fmt_g17(lap_tolerance) +
            "; the profile cannot be realized by an absorbing perforation");

    NodeField cbar(p.box, n, std::vector<double>(p.values.size(), 0.0));
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t j = 1; j < n; ++j)
            for (std::size_t i = 1; i < n; ++i)
                cbar.values[cbar.idx(i, j, k)] =
                    std::max(lap[p.idx(i, j, k)], 0.0) / p.values[p.idx(i, j, k)];
    auto clampi = [&](std::size_t i) { return std::min(std::max<std::size_t>(i, 1), n - 1); };
    for (std::size_t k = 0; k <= n; ++k)
        for (std::size_t j = 0; j <= n; ++j)
            for (std::size_t i = 0; i <= n; ++i)
                if (cbar.is_boundary(i, j, k))
                    cbar.values[cbar.idx(i, j, k)] =
                        cbar.values[cbar.idx(clampi(i), clampi(j), clampi(k))];
    return cbar;
}

namespace detail {

// y = (-lap_h + diag) x on interior nodes, Dirichlet zero: boundary entries
// of x are ignored (treated as zero) and boundary entries of y stay zero.
inline void apply_shifted_laplacian(const NodeField& diag, const std::vector<double>& x,
                                    std::vector<double>& y) {
    const std::size_t n = diag.n;
    const double inv_h2 = 1.0 / (diag.spacing() * diag.spacing());
    std::fill(y.begin(), y.end(), 0.0);
    auto at = [&](std::size_t i, std::size_t j, std::size_t k) -> double {
        if (i == 0 || j == 0 || k == 0 || i == n || j == n || k == n) return 0.0;
        return x[diag.idx(i, j, k)];
    };
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t j = 1; j < n; ++j)
            for (std::size_t i = 1; i < n; ++i) {
                const std::size_t id = diag.idx(i, j, k);
                const double nb = at(i - 1, j, k) + at(i + 1, j, k) + at(i, j - 1, k) +
                                  at(i, j + 1, k) + at(i, j, k - 1) + at(i, j, k + 1);
                y[id] = (6.0 * x[id] - nb) * inv_h2 + diag.values[id] * x[id];
            }
}

inline double interior_dot(const NodeField& ref, const std::vector<double>& a,
                           const std::vector<double>& b) {
    const std::size_t n = ref.n;
    double acc = 0.0;
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t j = 1; j < n; ++j)
            for (std::size_t i = 1; i < n; ++i) {
                const std::size_t id = ref.idx(i, j, k);
                acc += a[id] * b[id];
            }
    return acc;
}

// Conjugate gradients for the shifted Dirichlet Laplacian. Either converges
// to |r| <= tol |b| or throws, reporting how the residual moved.
inline std::vector<double> cg_interior(const NodeField& diag, const std::vector<double>& b,
                                       double tol, int max_iterations, int* iterations_out) {
    require(tol > 0.0, "cg: tolerance must be positive");
    require(max_iterations >= 1, "cg: need at least one iteration");
    std::vector<double> x(b.size(), 0.0), r(b), p(b), Ap(b.size(), 0.0);
    const double b2 = interior_dot(diag, b, b);
    if (b2 == 0.0) {
        if (iterations_out) *iterations_out = 0;
        return x;
    }
    double rs = b2;
    std::vector<double> history;
    for (int it = 1; it <= max_iterations; ++it) {
        apply_shifted_laplacian(diag, p, Ap);
        const double pAp = interior_dot(diag, p, Ap);
        require(pAp > 0.0, "cg: operator lost positive definiteness");
        const double alpha = rs / pAp;
        const std::size_t n = diag.n;
        for (std::size_t k = 1; k < n; ++k)
            for (std::size_t j = 1; j < n; ++j)
                for (std::size_t i = 1; i < n; ++i) {
                    const std::size_t id = diag.idx(i, j, k);
                    x[id] += alpha * p[id];
                    r[id] -= alpha * Ap[id];
                }
        const double rs_new = interior_dot(diag, r, r);
        history.push_back(std::sqrt(rs_new / b2));
        if (history.back() <= tol) {
            if (iterations_out) *iterations_out = it;
            return x;
        }
        const double beta = rs_new / rs;
        rs = rs_new;
        for (std::size_t k = 1; k < n; ++k)
            for (std::size_t j = 1; j < n; ++j)
                for (std::size_t i = 1; i < n; ++i) {
                    const std::size_t id = diag.idx(i, j, k);
                    p[id] = r[id] + beta * p[id];
                }
    }
    std::string msg = "cg: no convergence to " + fmt_g17(tol) + " within " +
                      std::to_string(max_iterations) + " iterations; relative residual moved ";
    msg += fmt_g17(history.front());
    if (history.size() > 2) msg += " -> " + fmt_g17(history[history.size() / 2]);
    msg += " -> " + fmt_g17(history.back());
    throw std::runtime_error(msg);
}

}  // namespace detail

// Pressure field for a given capacitance density, p = 1 on the boundary.
// cbar must be nonnegative on the same grid; the discrete maximum principle
// then keeps the result in (0, 1].
inline NodeField solve_p(const NodeField& cbar, double tol = 1e-10, int max_iterations = 4000,
                         int* iterations_out = nullptr) {
    for (double c : cbar.values) require(c >= 0.0, "solve_p: density must be nonnegative");
    const std::size_t n = cbar.n;
    std::vector<double> b(cbar.values.size(), 0.0);
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t j = 1; j < n; ++j)
            for (std::size_t i = 1; i < n; ++i) {
                const std::size_t id = cbar.idx(i, j, k);
                b[id] = -cbar.values[id];
            }
    const auto q = detail::cg_interior(cbar, b, tol, max_iterations, iterations_out);
    NodeField p(cbar.box, n, std::vector<double>(cbar.values.size(), 1.0));
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t j = 1; j < n; ++j)
            for (std::size_t i = 1; i < n; ++i) {
                const std::size_t id = cbar.idx(i, j, k);
                p.values[id] = 1.0 + q[id];
            }
    return p;
}

// Materializes a density field as a periodic hole layout: hole budget `a`
// per cell, capacitances sampled from the field by trilinear interpolation
// at the cell centers.
inline Cluster layout_from_cbar(const NodeField& cbar, double a) {
    return periodic_layout(cbar.box, a, [&](const vec3& x) { return cbar.trilinear(x); });
}

}  // namespace tdscat
