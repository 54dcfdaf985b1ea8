#pragma once

// Causal excitation signals. The built-in shape is the smooth bump
//   lambda(t) = exp(-1/t^2) for t > 0, 0 otherwise,
// which is C^infinity and vanishes with all derivatives at t = 0, so a
// delayed copy switches on without any jump. A user-sampled kind wraps a
// Trace; causality of user data is the caller's responsibility and lookups
// before the trace window return 0.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tdscat/trace.hpp"
#include "tdscat/util.hpp"

namespace tdscat {

enum class SignalKind { smooth_bump, delayed_smooth_bump, user_sampled };

namespace detail {

// exp(-1/t^2) underflows to exactly 0 for 1/t^2 > ~745; returning 0 early
// keeps the derivative formulas free of inf*0.
inline double bump_raw(double t) {
    if (t <= 0.0) return 0.0;
    const double inv2 = 1.0 / (t * t);
    if (inv2 > 745.0) return 0.0;
    return std::exp(-inv2);
}

inline double bump_d1(double t) {
    if (t <= 0.0) return 0.0;
    const double inv2 = 1.0 / (t * t);
    if (inv2 > 745.0) return 0.0;
    return 2.0 * std::exp(-inv2) / (t * t * t);
}

inline double bump_d2(double t) {
    if (t <= 0.0) return 0.0;
    const double inv2 = 1.0 / (t * t);
    if (inv2 > 745.0) return 0.0;
    const double t4 = t * t * t * t;
    return (4.0 * inv2 - 6.0) * std::exp(-inv2) / t4;
}

}  // namespace detail

class CausalSignal {
  public:
    static CausalSignal smooth_bump(double amplitude = 1.0) {
        CausalSignal s;
        s.kind_ = SignalKind::smooth_bump;
        s.amplitude_ = amplitude;
        return s;
    }

    static CausalSignal delayed_smooth_bump(double delay, double amplitude = 1.0) {
        require(delay >= 0.0, "delayed_smooth_bump: delay must be non-negative");
        CausalSignal s;
        s.kind_ = SignalKind::delayed_smooth_bump;
        s.amplitude_ = amplitude;
        s.delay_ = delay;
        return s;
    }

    static CausalSignal user_sampled(Trace data, Interp order = Interp::cubic) {
        CausalSignal s;
        s.kind_ = SignalKind::user_sampled;
        s.data_ = std::move(data);
        s.data_interp_ = order;
        return s;
    }

    SignalKind kind() const { return kind_; }
    double amplitude() const { return amplitude_; }
    double delay() const { return delay_; }

    // Value at time t; exactly 0 for t <= 0.
    double evaluate(double t) const {
        if (t <= 0.0) return 0.0;
        switch (kind_) {
            case SignalKind::smooth_bump:
                return amplitude_ * detail::bump_raw(t);
            case SignalKind::delayed_smooth_bump:
                return amplitude_ * detail::bump_raw(t - delay_);
            case SignalKind::user_sampled:
                return data_.value(t, data_interp_);
        }
        return 0.0;
    }

    // Time derivative of the given order (1 or 2). Analytic for the bump
    // kinds; centered finite differences of the interpolant for user data.
    double derivative(double t, int order = 1) const {
        require(order == 1 || order == 2, "derivative: order must be 1 or 2");
        if (t <= 0.0) return 0.0;
        switch (kind_) {
            case SignalKind::smooth_bump:
                return amplitude_ * (order == 1 ? detail::bump_d1(t) : detail::bump_d2(t));
            case SignalKind::delayed_smooth_bump:
                return amplitude_ *
                       (order == 1 ? detail::bump_d1(t - delay_) : detail::bump_d2(t - delay_));
            case SignalKind::user_sampled: {
                const double h = data_.dt / 4.0;
                const double vp = eval_causal(t + h);
                const double vm = eval_causal(t - h);
                if (order == 1) return (vp - vm) / (2.0 * h);
                const double v0 = eval_causal(t);
                return (vp - 2.0 * v0 + vm) / (h * h);
            }
        }
        return 0.0;
    }

    Trace sample(double t0, double dt, std::size_t count) const {
        require(count >= 2, "sample: at least two samples required");
        std::vector<double> v(count);
        for (std::size_t k = 0; k < count; ++k) v[k] = evaluate(t0 + dt * double(k));
        return Trace(t0, dt, std::move(v));
    }

    // Sup of |value| over [0, T], by dense sampling. Used to scale causality
    // tolerances.
    double sup_abs(double T, std::size_t count = 4096) const {
        require(T > 0.0, "sup_abs: T must be positive");
        double m = 0.0;
        for (std::size_t k = 0; k <= count; ++k) {
            const double v = std::abs(evaluate(T * double(k) / double(count)));
            if (v > m) m = v;
        }
        return m;
    }

  private:
    double eval_causal(double t) const { return t <= 0.0 ? 0.0 : evaluate(t); }

    SignalKind kind_ = SignalKind::smooth_bump;
    double amplitude_ = 1.0;
    double delay_ = 0.0;
    Trace data_;
    Interp data_interp_ = Interp::cubic;
};

}  // namespace tdscat
