#pragma once

// Uniformly sampled time trace with causal lookup semantics.
//
// Lookup contract shared by every solver in the library:
//   * queries at grid nodes return the stored sample (node snap window 1e-9
//     in units of dt, absorbing round-off in t0 + k*dt arithmetic),
//   * queries before the first sample return exactly 0 (causal extension),
//   * queries after the last sample throw (no extrapolation),
//   * cubic interpolation uses a 4-point stencil, one-sided at both ends;
//     traces shorter than 4 samples fall back to linear.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdscat/util.hpp"

namespace tdscat {

enum class Interp { linear, cubic };

inline const char* interp_name(Interp o) { return o == Interp::linear ? "linear" : "cubic"; }

inline Interp interp_from_name(const std::string& s) {
    if (s == "linear") return Interp::linear;
    if (s == "cubic") return Interp::cubic;
    throw std::invalid_argument("unknown interpolation order: " + s);
}

namespace detail {

inline constexpr double kNodeSnap = 1e-9;

// Interpolates the first n samples of a uniform grid starting at t0.
inline double interp_uniform(const double* s, std::size_t n, double t0, double dt, double t,
                             Interp order) {
    if (n == 0) return 0.0;
    const double x = (t - t0) / dt;
    const double r = std::round(x);
    if (std::abs(x - r) <= kNodeSnap) {
        if (r < 0.0) return 0.0;
        const std::size_t k = std::size_t(r);
        if (k >= n)
            throw std::out_of_range("trace lookup beyond final sample: t=" + fmt_g17(t) +
                                    ", window end=" + fmt_g17(t0 + dt * double(n - 1)));
        return s[k];
    }
    if (x < 0.0) return 0.0;
    if (x > double(n - 1))
        throw std::out_of_range("trace lookup beyond final sample: t=" + fmt_g17(t) +
                                ", window end=" + fmt_g17(t0 + dt * double(n - 1)));
    if (n >= 4 && order == Interp::cubic) {
        std::size_t k = std::size_t(x);
        if (k >= n - 1) k = n - 2;
        const std::size_t j0 = (k == 0) ? 0 : std::min(k - 1, n - 4);
        const double u = x - double(j0);
        const double w0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
        const double w1 = u * (u - 2.0) * (u - 3.0) / 2.0;
        const double w2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
        const double w3 = u * (u - 1.0) * (u - 2.0) / 6.0;
        return w0 * s[j0] + w1 * s[j0 + 1] + w2 * s[j0 + 2] + w3 * s[j0 + 3];
    }
    std::size_t k = std::size_t(x);
    if (k >= n - 1) k = n - 2;
    const double u = x - double(k);
    return (1.0 - u) * s[k] + u * s[k + 1];
}

}  // namespace detail

struct Trace {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> samples;

    Trace() = default;
    Trace(double t0_, double dt_, std::vector<double> samples_)
        : t0(t0_), dt(dt_), samples(std::move(samples_)) {
        require(dt > 0.0, "Trace: dt must be positive");
        require(samples.size() >= 2, "Trace: at least two samples required");
    }

    std::size_t size() const { return samples.size(); }
    double t_end() const { return t0 + dt * double(samples.size() - 1); }

    double value(double t, Interp order = Interp::cubic) const {
        return detail::interp_uniform(samples.data(), samples.size(), t0, dt, t, order);
    }

    // Lookup restricted to the first `avail` samples, used by the causal
    // marchers: the discrete equation at step n may only read samples that
    // exist at step n.
    double value_prefix(double t, std::size_t avail, Interp order) const {
        if (avail > samples.size()) avail = samples.size();
        return detail::interp_uniform(samples.data(), avail, t0, dt, t, order);
    }
};

// Integral of the linear interpolant of `tr` over [a, b]. The trace is
// extended by zero before t0; integrating past the final sample throws.
inline double trace_integral(const Trace& tr, double a, double b) {
    if (!(b > a)) return 0.0;
    const double t0 = tr.t0, dt = tr.dt;
    const std::size_t n = tr.samples.size();
    if (b <= t0) return 0.0;
    if (a < t0) a = t0;
    double xa = (a - t0) / dt;
    double xb = (b - t0) / dt;
    const double last = double(n - 1);
    if (xb > last + detail::kNodeSnap)
        throw std::out_of_range("trace_integral: upper bound beyond final sample");
    if (xb > last) xb = last;
    if (xa < 0.0) xa = 0.0;
    if (xa >= xb) return 0.0;
    const double* s = tr.samples.data();

    // Piecewise-linear antiderivative accumulated cell by cell.
    auto cell_part = [&](std::size_t k, double u1, double u2) {
        return dt * (s[k] * (u2 - u1) + (s[k + 1] - s[k]) * 0.5 * (u2 * u2 - u1 * u1));
    };
    std::size_t ka = std::size_t(xa);
    if (ka >= n - 1) ka = n - 2;
    std::size_t kb = std::size_t(xb);
    if (kb >= n - 1) kb = n - 2;
    if (ka == kb) return cell_part(ka, xa - double(ka), xb - double(ka));
    double acc = cell_part(ka, xa - double(ka), 1.0);
    for (std::size_t k = ka + 1; k < kb; ++k) acc += dt * 0.5 * (s[k] + s[k + 1]);
    acc += cell_part(kb, 0.0, xb - double(kb));
    return acc;
}

}  // namespace tdscat
