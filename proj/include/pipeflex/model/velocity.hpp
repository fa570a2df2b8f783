#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include "pipeflex/error.hpp"

namespace pipeflex {

enum class VelocityKind { Constant, SinusoidalOffset, SmoothRamp, SplineTable };

inline const char* to_string(VelocityKind kind)
{
    switch (kind) {
    case VelocityKind::Constant: return "constant";
    case VelocityKind::SinusoidalOffset: return "sinusoidal_offset";
    case VelocityKind::SmoothRamp: return "smooth_ramp";
    case VelocityKind::SplineTable: return "spline_table";
    }
    return "?";
}

struct ConstantVelocity {
    double V0 = 1.0;
};

/// V(t) = V0 + A sin(omega t).
struct SinusoidalVelocity {
    double V0 = 1.0;
    double amplitude = 0.0;
    double omega = 0.0;
};

/// Quintic smoothstep from V_start to V_end over [ramp_start, ramp_end]; C2 in t.
struct SmoothRampVelocity {
    double V_start = 1.0;
    double V_end = 1.0;
    double ramp_start = 0.0;
    double ramp_end = 1.0;
};

/// Natural cubic spline through (times[i], values[i]); times[0] must be 0.
struct SplineTableVelocity {
    std::vector<double> times;
    std::vector<double> values;
};

using VelocitySpec =
    std::variant<ConstantVelocity, SinusoidalVelocity, SmoothRampVelocity, SplineTableVelocity>;

struct VelocitySample {
    double V = 0.0;
    double V_t = 0.0;
};

namespace detail {

// Immutable natural cubic spline backed by GSL. Evaluation passes no
// accelerator, so a single instance can be shared across threads.
class NaturalSpline {
public:
    NaturalSpline(const std::vector<double>& x, const std::vector<double>& y)
    : spline_(gsl_spline_alloc(gsl_interp_cspline, x.size()), &gsl_spline_free)
    {
        if (!spline_) throw InvalidArgument("spline allocation failed");
        if (gsl_spline_init(spline_.get(), x.data(), y.data(), x.size()) != GSL_SUCCESS)
            throw InvalidArgument("spline knots must be strictly increasing");
    }

    double value(double t) const { return gsl_spline_eval(spline_.get(), t, nullptr); }
    double derivative(double t) const { return gsl_spline_eval_deriv(spline_.get(), t, nullptr); }

private:
    std::unique_ptr<gsl_spline, decltype(&gsl_spline_free)> spline_;
};

inline void silence_gsl()
{
    // GSL aborts by default on domain errors; all inputs are range-checked first.
    static const bool once = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)once;
}

inline double smoothstep5(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
inline double smoothstep5_prime(double u) { return 30.0 * u * u * (1.0 - u) * (1.0 - u); }

} // namespace detail

/// A signed, C2 fluid velocity V(t) together with the time horizon [0, horizon]
/// over which its suprema are taken.
class VelocityProfile {
public:
    VelocityProfile(VelocitySpec spec, double horizon) : spec_(std::move(spec)), horizon_(horizon)
    {
        if (!(std::isfinite(horizon_) && horizon_ > 0.0))
            throw InvalidArgument("velocity horizon must be > 0");
        std::visit([this](const auto& s) { init(s); }, spec_);
    }

    static VelocityProfile constant(double V0, double horizon)
    {
        return VelocityProfile(ConstantVelocity{V0}, horizon);
    }
    static VelocityProfile sinusoidal(double V0, double amplitude, double omega, double horizon)
    {
        return VelocityProfile(SinusoidalVelocity{V0, amplitude, omega}, horizon);
    }

    VelocityKind kind() const noexcept { return static_cast<VelocityKind>(spec_.index()); }
    const VelocitySpec& spec() const noexcept { return spec_; }
    double horizon() const noexcept { return horizon_; }

    VelocitySample eval(double t) const
    {
        if (!(t >= 0.0)) throw OutOfHorizon(t);
        return std::visit([&](const auto& s) { return eval_impl(s, t); }, spec_);
    }

    /// Same profile with a different horizon (tabulated profiles cannot be extended).
    VelocityProfile with_horizon(double horizon) const { return VelocityProfile(spec_, horizon); }

private:
    void init(const ConstantVelocity& s)
    {
        if (!std::isfinite(s.V0) || s.V0 == 0.0) throw InvalidArgument("velocity sign not constant");
    }
    void init(const SinusoidalVelocity& s)
    {
        if (!(std::isfinite(s.V0) && std::isfinite(s.amplitude) && std::isfinite(s.omega)))
            throw InvalidArgument("velocity parameters must be finite");
        if (s.omega < 0.0) throw InvalidArgument("omega must be >= 0");
        if (!(std::abs(s.V0) > std::abs(s.amplitude)))
            throw InvalidArgument("velocity sign not constant");
    }
    void init(const SmoothRampVelocity& s)
    {
        if (!(s.ramp_end > s.ramp_start && s.ramp_start >= 0.0))
            throw InvalidArgument("ramp requires 0 <= ramp_start < ramp_end");
        if (!(s.V_start * s.V_end > 0.0)) throw InvalidArgument("velocity sign not constant");
    }
    void init(const SplineTableVelocity& s)
    {
        detail::silence_gsl();
        if (s.times.size() != s.values.size()) throw InvalidArgument("spline table size mismatch");
        if (s.times.size() < 3) throw InvalidArgument("spline table needs at least 3 knots");
        if (s.times.front() != 0.0) throw InvalidArgument("spline table must start at t = 0");
        if (horizon_ > s.times.back() * (1.0 + 1e-12))
            throw InvalidArgument("horizon exceeds the spline table");
        spline_ = std::make_shared<const detail::NaturalSpline>(s.times, s.values);
        // The spline may overshoot between knots; the sign check uses the sampled bounds.
        const auto [lo, hi] = sampled_range();
        if (!(lo > 0.0 || hi < 0.0)) throw InvalidArgument("velocity sign not constant");
    }

    std::pair<double, double> sampled_range() const
    {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        constexpr int n = 20001;
        for (int i = 0; i < n; ++i) {
            const double v = eval(horizon_ * i / (n - 1)).V;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return {lo, hi};
    }

    VelocitySample eval_impl(const ConstantVelocity& s, double) const { return {s.V0, 0.0}; }
    VelocitySample eval_impl(const SinusoidalVelocity& s, double t) const
    {
        return {s.V0 + s.amplitude * std::sin(s.omega * t),
                s.amplitude * s.omega * std::cos(s.omega * t)};
    }
    VelocitySample eval_impl(const SmoothRampVelocity& s, double t) const
    {
        const double span = s.ramp_end - s.ramp_start;
        const double u = std::clamp((t - s.ramp_start) / span, 0.0, 1.0);
        const double jump = s.V_end - s.V_start;
        return {s.V_start + jump * detail::smoothstep5(u), jump * detail::smoothstep5_prime(u) / span};
    }
    VelocitySample eval_impl(const SplineTableVelocity& s, double t) const
    {
        const double t_max = s.times.back();
        if (t > t_max) {
            if (t > t_max * (1.0 + 1e-12)) throw OutOfHorizon(t);
            t = t_max;
        }
        return {spline_->value(t), spline_->derivative(t)};
    }

    VelocitySpec spec_;
    double horizon_;
    std::shared_ptr<const detail::NaturalSpline> spline_;
};

/// Suprema/infima of the velocity over the profile horizon.
struct VelocityBounds {
    double sup_V2 = 0.0;
    double inf_V2 = 0.0;
    double sup_absV = 0.0;
    double sup_absVtV = 0.0;
};

namespace detail {

inline double round_up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }
inline double round_down(double x) { return std::max(0.0, std::nextafter(x, 0.0)); }

inline VelocityBounds sinusoidal_bounds(const SinusoidalVelocity& s, double horizon)
{
    const double V0 = s.V0;
    const double A = s.amplitude;
    const double two_pi = 2.0 * std::numbers::pi;
    // Phase interval covered by the horizon; a full period makes the bounds global.
    const double phase_max = std::min(s.omega * horizon, two_pi);

    std::vector<double> phases{0.0, phase_max};
    auto add_branch = [&](double base) {
        for (double th = base; th <= phase_max; th += two_pi)
            if (th >= 0.0) phases.push_back(th);
    };
    auto add_sine_level = [&](double sine) {
        const double a = std::asin(std::clamp(sine, -1.0, 1.0));
        add_branch(a < 0.0 ? a + two_pi : a);
        add_branch(std::numbers::pi - a);
    };
    add_sine_level(1.0);
    add_sine_level(-1.0);
    if (A != 0.0) {
        // d/dθ [cos θ (V0 + A sin θ)] = 0  <=>  2A s^2 + V0 s - A = 0 with s = sin θ.
        const double disc = std::sqrt(V0 * V0 + 8.0 * A * A);
        for (double root : {(-V0 + disc) / (4.0 * A), (-V0 - disc) / (4.0 * A)})
            if (std::abs(root) <= 1.0) add_sine_level(root);
    }

    VelocityBounds b;
    b.inf_V2 = std::numeric_limits<double>::infinity();
    for (double th : phases) {
        const double v = V0 + A * std::sin(th);
        const double vt = A * s.omega * std::cos(th);
        b.sup_V2 = std::max(b.sup_V2, v * v);
        b.inf_V2 = std::min(b.inf_V2, v * v);
        b.sup_absV = std::max(b.sup_absV, std::abs(v));
        b.sup_absVtV = std::max(b.sup_absVtV, std::abs(vt * v));
    }
    if (A == 0.0 || s.omega == 0.0) {
        b.sup_absVtV = 0.0;
        return b;
    }
    b.sup_absVtV = round_up(b.sup_absVtV);
    return b;
}

// Dense scan followed by Brent refinement of every interior sample extremum.
inline double refined_extremum(const VelocityProfile& p, double (*f)(VelocitySample), bool maximize)
{
    const double H = p.horizon();
    constexpr int n = 10001;
    const double step = H / (n - 1);
    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) values[i] = f(p.eval(std::min(H, i * step)));

    const double sign = maximize ? 1.0 : -1.0;
    double best = sign * values[0];
    best = std::max(best, sign * values[n - 1]);
    auto objective = [&](double t) { return -sign * f(p.eval(std::clamp(t, 0.0, H))); };
    for (int i = 1; i + 1 < n; ++i) {
        const double vi = sign * values[i];
        if (vi >= sign * values[i - 1] && vi >= sign * values[i + 1]) {
            std::uintmax_t iters = 200;
            const auto r = boost::math::tools::brent_find_minima(
                objective, (i - 1) * step, std::min(H, (i + 1) * step), 52, iters);
            best = std::max({best, vi, -r.second});
        }
    }
    return sign * best;
}

} // namespace detail

/// Velocity bounds over the horizon. Closed form for constant and sinusoidal
/// profiles; dense sampling plus local refinement otherwise. Upper bounds are
/// rounded outward by one ulp whenever they are not exact.
inline VelocityBounds compute_bounds(const VelocityProfile& profile)
{
    if (const auto* s = std::get_if<ConstantVelocity>(&profile.spec())) {
        const double v2 = s->V0 * s->V0;
        return {v2, v2, std::abs(s->V0), 0.0};
    }
    if (const auto* s = std::get_if<SinusoidalVelocity>(&profile.spec()))
        return detail::sinusoidal_bounds(*s, profile.horizon());

    using detail::refined_extremum;
    VelocityBounds b;
    const double sup_abs = refined_extremum(profile, [](VelocitySample s) { return std::abs(s.V); }, true);
    const double inf_abs = refined_extremum(profile, [](VelocitySample s) { return std::abs(s.V); }, false);
    b.sup_absV = detail::round_up(sup_abs);
    b.sup_V2 = detail::round_up(sup_abs * sup_abs);
    b.inf_V2 = detail::round_down(inf_abs * inf_abs);
    const double vtv = refined_extremum(profile, [](VelocitySample s) { return std::abs(s.V * s.V_t); }, true);
    b.sup_absVtV = vtv == 0.0 ? 0.0 : detail::round_up(vtv);
    return b;
}

} // namespace pipeflex
