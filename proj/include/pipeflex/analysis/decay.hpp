#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "pipeflex/error.hpp"
#include "pipeflex/model/constants.hpp"
#include "pipeflex/timestep/simulate.hpp"

namespace pipeflex {

/// Least-squares line through (t, ln y) over a time window: y ~ amplitude exp(-rate t).
struct DecayFit {
    double t_start = 0.0;
    double t_end = 0.0;
    double rate = 0.0;
    double amplitude = 0.0;
    double r_squared = 0.0;
    int samples_used = 0;
};

struct TimeWindow {
    double t_start;
    double t_end;
};

/// Fits y(t) on samples inside the window with y > 0. Throws
/// InsufficientData when fewer than 10 such samples exist.
inline DecayFit fit_log_linear(const std::vector<double>& t, const std::vector<double>& y, TimeWindow window)
{
    if (t.size() != y.size()) throw InvalidArgument("time and value series differ in length");
    if (!(window.t_start < window.t_end)) throw InvalidArgument("fit window must satisfy t_start < t_end");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < window.t_start || t[i] > window.t_end) continue;
        if (!(y[i] > 0.0) || !std::isfinite(y[i])) continue;
        xs.push_back(t[i]);
        ys.push_back(std::log(y[i]));
    }
    if (xs.size() < 10)
        throw InsufficientData("decay fit needs at least 10 positive samples in the window, got " +
                               std::to_string(xs.size()));
    // Shifting by the first sample makes a constant series exactly constant.
    const double x0 = xs.front(), y0 = ys.front();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] -= x0;
        ys[i] -= y0;
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const double slope = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - my - slope * (xs[i] - mx);
        ss_res += r * r;
    }
    DecayFit fit;
    fit.t_start = window.t_start;
    fit.t_end = window.t_end;
    fit.rate = -slope;
    fit.amplitude = std::exp(y0 + my - slope * (mx + x0));
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.samples_used = static_cast<int>(xs.size());
    return fit;
}

inline TimeWindow second_half(const std::vector<double>& t)
{
    if (t.empty()) throw InsufficientData("empty series");
    return {0.5 * (t.front() + t.back()), t.back()};
}

inline std::vector<double> sample_times(const Trajectory& tr)
{
    std::vector<double> t;
    t.reserve(tr.size());
    for (const auto& s : tr.samples) t.push_back(s.t);
    return t;
}

inline std::vector<double> sample_energies(const Trajectory& tr)
{
    std::vector<double> e;
    e.reserve(tr.size());
    for (const auto& s : tr.samples) e.push_back(s.E);
    return e;
}

/// Energy decay rate of a trajectory; the window defaults to the second half.
inline DecayFit fit_decay(const Trajectory& tr, std::optional<TimeWindow> window = std::nullopt)
{
    const auto t = sample_times(tr);
    return fit_log_linear(t, sample_energies(tr), window ? *window : second_half(t));
}

struct DecayBoundCheck {
    bool holds = true;
    double worst_margin = std::numeric_limits<double>::infinity(); ///< min of (k0 E(s) e^{-k1 (t-s)} - E(t)) / E(s)
    double worst_s = 0.0;
    double worst_t = 0.0;
    int anchors = 0;
};

/// Checks E(t) <= k0 E(s) exp(-k1 (t - s)) for s on at most `max_anchors`
/// evenly spaced samples and every later sample t. A pair passes when the
/// margin is >= -tol E(s).
inline DecayBoundCheck check_decay_bound(const std::vector<double>& t, const std::vector<double>& E, double k0,
                                         double k1, double tol = 1e-3, int max_anchors = 100)
{
    if (t.size() != E.size()) throw InvalidArgument("time and energy series differ in length");
    DecayBoundCheck out;
    const std::size_t n = t.size();
    if (n == 0) return out;
    const std::size_t anchors = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, max_anchors)));
    std::size_t last = n;
    for (std::size_t j = 0; j < anchors; ++j) {
        const std::size_t i = anchors == 1 ? 0 : j * (n - 1) / (anchors - 1);
        if (i == last) continue;
        last = i;
        ++out.anchors;
        for (std::size_t k = i; k < n; ++k) {
            const double margin = k0 * E[i] * std::exp(-k1 * (t[k] - t[i])) - E[k];
            const double rel = E[i] > 0.0 ? margin / E[i] : margin;
            if (margin < -tol * std::max(E[i], 0.0)) out.holds = false;
            if (rel < out.worst_margin) {
                out.worst_margin = rel;
                out.worst_s = t[i];
                out.worst_t = t[k];
            }
        }
    }
    return out;
}

inline DecayBoundCheck check_decay_bound(const Trajectory& tr, const StabilityConstants& k, double tol = 1e-3,
                                         int max_anchors = 100)
{
    return check_decay_bound(sample_times(tr), sample_energies(tr), k.k0, k.k1, tol, max_anchors);
}

struct SandwichCheck {
    bool vacuous = true;       ///< no sample with E > 0
    bool positive = false;     ///< 0 < min ratio and max ratio finite
    bool holds = false;        ///< lower <= min ratio and max ratio <= upper
    bool literal_holds = false; ///< same test with the constants as printed
    double emp_min_ratio = 0.0;
    double emp_max_ratio = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double literal_xi1 = 0.0;
    double literal_xi2 = 0.0;
    int samples_used = 0;
};

/// Empirical band of Lcal / E over samples with E > 0, compared with the
/// equivalence constants.
inline SandwichCheck check_sandwich(const Trajectory& tr, const SandwichConstants& sw)
{
    SandwichCheck out;
    out.lower = sw.lower;
    out.upper = sw.upper;
    out.literal_xi1 = sw.literal_xi1;
    out.literal_xi2 = sw.literal_xi2;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& s : tr.samples) {
        if (!(s.E > 0.0)) continue;
        const double r = s.Lcal / s.E;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        ++out.samples_used;
    }
    if (out.samples_used == 0) return out;
    out.vacuous = false;
    out.emp_min_ratio = lo;
    out.emp_max_ratio = hi;
    out.positive = lo > 0.0 && std::isfinite(hi);
    out.holds = out.positive && sw.lower <= lo && hi <= sw.upper;
    out.literal_holds = out.positive && sw.literal_xi1 <= lo && hi <= sw.literal_xi2;
    return out;
}

} // namespace pipeflex
