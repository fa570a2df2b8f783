#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pipeflex/error.hpp"
#include "pipeflex/model/params.hpp"
#include "pipeflex/model/velocity.hpp"

namespace pipeflex {

/// Poincare constant for functions vanishing at x = 0: int v^2 <= P int v_x^2.
inline double poincare_constant(double L) noexcept { return 0.5 * L * L; }

/// First tension threshold: L^2/4 (m_p + 2 m_f) + 2 sqrt(2) L m_f sup|V|.
inline double compute_T1(const BeamParams& p, const VelocityBounds& b) noexcept
{
    return 0.25 * p.L * p.L * p.inertia() + 2.0 * std::numbers::sqrt2 * p.L * p.m_f * b.sup_absV;
}

/// Second tension threshold: c^2 L^2 / (8 (c - m_p - 2 m_f)) + 2 m_f sup|V_t V|.
/// Throws CertificateError::Inapplicable when c <= m_p + 2 m_f.
inline double compute_T2(const BeamParams& p, const VelocityBounds& b)
{
    const double excess = p.c - p.inertia();
    if (!(excess > 0.0))
        throw CertificateError(CertificateError::Kind::Inapplicable,
                               "damping too small: c must exceed m_p + 2 m_f");
    return p.c * p.c * p.L * p.L / (8.0 * excess) + 2.0 * p.m_f * b.sup_absVtV;
}

struct AssumptionCheck {
    enum class Failure { None, TensionTooSmall, DampingTooSmall };

    bool holds = false;
    double T1 = 0.0;
    double T2 = 0.0;
    double T_star = 0.0;
    double margin = 0.0; ///< T - T_star
    Failure failure = Failure::None;
};

inline const char* to_string(AssumptionCheck::Failure f)
{
    switch (f) {
    case AssumptionCheck::Failure::None: return "none";
    case AssumptionCheck::Failure::TensionTooSmall: return "tension-too-small";
    case AssumptionCheck::Failure::DampingTooSmall: return "damping-too-small";
    }
    return "?";
}

/// Evaluates T > 2 m_f sup V^2 + max{T1, T2}. Never throws.
inline AssumptionCheck check_assumptions(const BeamParams& p, const VelocityBounds& b) noexcept
{
    AssumptionCheck r;
    r.T1 = compute_T1(p, b);
    if (p.c > p.inertia()) {
        r.T2 = compute_T2(p, b);
        r.T_star = 2.0 * p.m_f * b.sup_V2 + std::max(r.T1, r.T2);
        r.margin = p.T - r.T_star;
        r.holds = p.T > r.T_star;
        r.failure = r.holds ? AssumptionCheck::Failure::None : AssumptionCheck::Failure::TensionTooSmall;
    } else {
        r.T2 = std::numeric_limits<double>::infinity();
        r.T_star = r.T2;
        r.margin = -r.T2;
        r.failure = AssumptionCheck::Failure::DampingTooSmall;
    }
    return r;
}

/// Equivalence constants between the Lyapunov functional and the energy,
/// lower * E <= Lcal <= upper * E.
///
/// The displayed closed forms are labelled the other way round (the max{...}
/// expression bounds Lcal from above) and contain a free V^2(t). `lower` and
/// `upper` freeze V^2(t) to whichever of inf/sup V^2 makes the bound
/// conservative. `literal_xi1` (max form) and `literal_xi2` (min form) are the
/// printed expressions with V^2(t) set to sup V^2, kept for reporting.
struct SandwichConstants {
    double alpha1 = 1.0;
    double margin = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double literal_xi1 = 0.0;
    double literal_xi2 = 0.0;
    bool reconstructed = true; ///< ordering swapped and V^2(t) frozen relative to the printed forms
};

/// T/2 - m_f sup V^2 - P (m_p + 2 m_f) / (2 alpha1) - 2 m_f sup|V| sqrt(P).
inline double sandwich_margin(const BeamParams& p, const VelocityBounds& b, double alpha1) noexcept
{
    const double P = poincare_constant(p.L);
    return 0.5 * p.T - p.m_f * b.sup_V2 - P * p.inertia() / (2.0 * alpha1) -
           2.0 * p.m_f * b.sup_absV * std::sqrt(P);
}

namespace detail {

inline SandwichConstants sandwich_for_alpha(const BeamParams& p, const VelocityBounds& b, double alpha1)
{
    const double P = poincare_constant(p.L);
    const double a = 0.5 * p.T - p.m_f * b.sup_V2;
    const double bb = 0.5 * p.T - p.m_f * b.inf_V2;
    const double X = P * p.inertia() / (2.0 * alpha1) + 2.0 * p.m_f * b.sup_absV * std::sqrt(P);

    SandwichConstants s;
    s.alpha1 = alpha1;
    s.margin = a - X;
    s.upper = std::max({(bb + X) / a, 2.0 * (1.0 + 0.5 * alpha1), 2.0});
    s.lower = std::min({(a - X) / bb, 2.0 * (1.0 - 0.5 * alpha1), 2.0});
    s.literal_xi1 = std::max({(a + X) / a, 2.0 * (1.0 + 0.5 * alpha1), 2.0});
    s.literal_xi2 = std::min({(a - X) / bb, 2.0 * (1.0 - 0.5 * alpha1), 2.0});
    return s;
}

} // namespace detail

/// Picks alpha1 in [1, 2) on a 1000-point grid maximizing the positive
/// sandwich margin, then evaluates the constants.
inline SandwichConstants compute_sandwich_constants(const BeamParams& p, const VelocityBounds& b)
{
    if (!check_assumptions(p, b).holds)
        throw CertificateError(CertificateError::Kind::AssumptionViolation,
                               "tension below the stability threshold");
    constexpr int grid = 1000;
    double best_alpha = std::numeric_limits<double>::quiet_NaN();
    double best_margin = 0.0;
    for (int k = 0; k < grid; ++k) {
        const double alpha1 = 1.0 + static_cast<double>(k) / grid;
        const double m = sandwich_margin(p, b, alpha1);
        if (m > best_margin) {
            best_margin = m;
            best_alpha = alpha1;
        }
    }
    // The margin grows with alpha1, so a threshold-hugging tension may need
    // alpha1 closer to 2 than the grid resolves.
    for (int j = 11; std::isnan(best_alpha) && j < 53; ++j) {
        const double alpha1 = 2.0 - std::ldexp(1.0, -j);
        if (sandwich_margin(p, b, alpha1) > 0.0) best_alpha = alpha1;
    }
    if (std::isnan(best_alpha))
        throw CertificateError(CertificateError::Kind::AssumptionViolation,
                               "no alpha1 in [1, 2) gives a positive sandwich margin");
    return detail::sandwich_for_alpha(p, b, best_alpha);
}

/// Quantities of the decay estimate for one value of the free parameter delta.
struct DecayTerms {
    double delta = 0.0;
    double alpha1 = 0.0; ///< 2 (c - m_p - 2 m_f - delta) / c
    double gamma0 = 0.0; ///< c - c alpha1 / 2 - m_p - 2 m_f
    double gamma1 = 0.0; ///< T - 2 m_f sup|V_t V| - 2 m_f sup V^2 - c P / (2 alpha1)
    double vartheta = 0.0;
    bool admissible = false;
};

inline DecayTerms decay_terms(const BeamParams& p, const VelocityBounds& b, double delta) noexcept
{
    DecayTerms d;
    d.delta = delta;
    const double rho = p.inertia();
    d.alpha1 = 2.0 * (p.c - rho - delta) / p.c;
    d.gamma0 = p.c - p.c * d.alpha1 / 2.0 - rho;
    d.gamma1 = p.T - 2.0 * p.m_f * b.sup_absVtV - 2.0 * p.m_f * b.sup_V2 -
               p.c * poincare_constant(p.L) / (2.0 * d.alpha1);
    d.admissible = delta > 0.0 && delta < p.c - rho && d.gamma1 > 0.0;
    d.vartheta = std::min({2.0 * d.gamma0 / rho, 2.0 * d.gamma1 / (p.T - 2.0 * p.m_f * b.inf_V2), 2.0});
    return d;
}

/// Every explicit constant of the exponential decay estimate
/// E(t) <= k0 E(s) exp(-k1 (t - s)).
struct StabilityConstants {
    double P = 0.0;
    double T1 = 0.0;
    double T2 = 0.0;
    double T_star = 0.0;
    double alpha1_sandwich = 0.0;
    double xi1 = 0.0; ///< lower equivalence constant
    double xi2 = 0.0; ///< upper equivalence constant
    double delta = 0.0;
    double alpha1_decay = 0.0;
    double gamma0 = 0.0;
    double gamma1 = 0.0;
    double vartheta = 0.0;
    double k1 = 0.0; ///< vartheta / xi2
    double k0 = 0.0; ///< xi2 / xi1
    SandwichConstants sandwich;
};

/// Builds the decay certificate, choosing delta in (0, c - m_p - 2 m_f) to
/// maximize k1: a 500-point grid locates the best cell, golden-section search refines it.
inline StabilityConstants compute_decay_certificate(const BeamParams& p, const VelocityBounds& b)
{
    const double span = p.c - p.inertia();
    if (!(span > 0.0))
        throw CertificateError(CertificateError::Kind::Inapplicable,
                               "damping too small: c must exceed m_p + 2 m_f");
    const AssumptionCheck check = check_assumptions(p, b);
    if (!check.holds)
        throw CertificateError(CertificateError::Kind::AssumptionViolation,
                               "tension below the stability threshold");
    const SandwichConstants sw = compute_sandwich_constants(p, b);

    constexpr int grid = 500;
    auto delta_at = [&](int i) { return span * static_cast<double>(i) / (grid + 1); };
    auto score = [&](double delta) {
        const DecayTerms d = decay_terms(p, b, delta);
        return d.admissible ? d.vartheta : -std::numeric_limits<double>::infinity();
    };
    int best_i = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= grid; ++i) {
        const double s = score(delta_at(i));
        if (s > best) {
            best = s;
            best_i = i;
        }
    }
    if (best_i < 0)
        throw CertificateError(CertificateError::Kind::Infeasible, "no admissible delta");

    // vartheta(delta) is unimodal with a kink at the maximum; golden section
    // does not need derivatives there.
    double lo = delta_at(best_i - 1), hi = delta_at(best_i + 1);
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = score(x1), f2 = score(x2);
    for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = score(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = score(x1);
        }
    }
    double delta = delta_at(best_i);
    for (double x : {x1, x2}) {
        const double s = score(x);
        if (s > best) {
            best = s;
            delta = x;
        }
    }

    const DecayTerms d = decay_terms(p, b, delta);
    StabilityConstants k;
    k.P = poincare_constant(p.L);
    k.T1 = check.T1;
    k.T2 = check.T2;
    k.T_star = check.T_star;
    k.alpha1_sandwich = sw.alpha1;
    k.xi1 = sw.lower;
    k.xi2 = sw.upper;
    k.delta = d.delta;
    k.alpha1_decay = d.alpha1;
    k.gamma0 = d.gamma0;
    k.gamma1 = d.gamma1;
    k.vartheta = d.vartheta;
    k.k1 = d.vartheta / sw.upper;
    k.k0 = sw.upper / sw.lower;
    k.sandwich = sw;
    return k;
}

} // namespace pipeflex
