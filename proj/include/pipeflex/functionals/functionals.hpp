#pragma once

#include <cmath>

#include "pipeflex/fem/hermite.hpp"
#include "pipeflex/model/params.hpp"
#include "pipeflex/model/velocity.hpp"
#include "pipeflex/timestep/state.hpp"

namespace pipeflex {

/// Spatial integrals of products of w = q and w_t = q_dot over [0, L].
struct FieldIntegrals {
    double w_w = 0.0;     ///< int w^2
    double wt_wt = 0.0;   ///< int w_t^2
    double wx_wx = 0.0;   ///< int w_x^2
    double wxx_wxx = 0.0; ///< int w_xx^2
    double w_wt = 0.0;    ///< int w w_t
    double w_wx = 0.0;    ///< int w w_x
    double wx_wt = 0.0;   ///< int w_x w_t
    double w_L = 0.0;
    double wt_L = 0.0;
};

/// Element-by-element Gauss quadrature. Every integrand is a polynomial of
/// degree <= 6 per element, so Q = 4 is exact; Q = 8 serves as a cross-check.
template <int Q = 4>
FieldIntegrals integrate_fields(const fem::HermiteSpace& space, const Eigen::VectorXd& q,
                                const Eigen::VectorXd& q_dot)
{
    const auto& rule = fem::GaussRule<Q>::get();
    const double h = space.h();
    FieldIntegrals I;
    for (int e = 0; e < space.n_elements(); ++e) {
        const Eigen::Vector4d cw = fem::gather(space, q, e);
        const Eigen::Vector4d cv = fem::gather(space, q_dot, e);
        for (int g = 0; g < Q; ++g) {
            const auto sh = fem::hermite_shapes(rule.points[g], h);
            double w = 0, wx = 0, wxx = 0, v = 0;
            for (int a = 0; a < 4; ++a) {
                w += sh.N[a] * cw[a];
                wx += sh.dN[a] * cw[a];
                wxx += sh.d2N[a] * cw[a];
                v += sh.N[a] * cv[a];
            }
            const double jw = rule.weights[g] * h;
            I.w_w += jw * w * w;
            I.wt_wt += jw * v * v;
            I.wx_wx += jw * wx * wx;
            I.wxx_wxx += jw * wxx * wxx;
            I.w_wt += jw * w * v;
            I.w_wx += jw * w * wx;
            I.wx_wt += jw * wx * v;
        }
    }
    I.w_L = q[space.tip_displacement_dof()];
    I.wt_L = q_dot[space.tip_displacement_dof()];
    return I;
}

/// E = 1/2 (m_p + 2 m_f) int w_t^2 + EI/2 int w_xx^2 + (T/2 - m_f V^2) int w_x^2.
inline double energy(const FieldIntegrals& I, const BeamParams& p, double V) noexcept
{
    return 0.5 * p.inertia() * I.wt_wt + 0.5 * p.EI * I.wxx_wxx + (0.5 * p.T - p.m_f * V * V) * I.wx_wx;
}

struct GFunctionals {
    double G1 = 0.0; ///< (m_p + 2 m_f) int w w_t
    double G2 = 0.0; ///< 2 m_f V int w w_x
    double G = 0.0;
};

inline GFunctionals g_functionals(const FieldIntegrals& I, const BeamParams& p, double V) noexcept
{
    GFunctionals g;
    g.G1 = p.inertia() * I.w_wt;
    g.G2 = 2.0 * p.m_f * V * I.w_wx;
    g.G = g.G1 + g.G2;
    return g;
}

/// dE/dt = -c int w_t^2 - 2 m_f V_t int w_t w_x - 2 m_f V_t V int w_x^2.
inline double dE_dt_analytic(const FieldIntegrals& I, const BeamParams& p, double V, double V_t) noexcept
{
    return -p.c * I.wt_wt - 2.0 * p.m_f * V_t * I.wx_wt - 2.0 * p.m_f * V_t * V * I.wx_wx;
}

/// dG/dt = -EI int w_xx^2 - (T - 2 m_f V^2) int w_x^2 - c int w w_t
///         + 4 m_f V int w_x w_t + (m_p + 2 m_f) int w_t^2.
///
/// The Coriolis term 4 m_f V w_xt contributes 4 m_f V int w_x w_t once the
/// boundary condition at x = L absorbs the tip terms; the semi-discrete
/// system satisfies this identity exactly.
inline double dG_dt_analytic(const FieldIntegrals& I, const BeamParams& p, double V) noexcept
{
    return -p.EI * I.wxx_wxx - (p.T - 2.0 * p.m_f * V * V) * I.wx_wx - p.c * I.w_wt +
           4.0 * p.m_f * V * I.wx_wt + p.inertia() * I.wt_wt;
}

/// The same identity with the Coriolis cross term weighted 2 m_f V, as it is
/// usually printed. Kept for comparison only; it misses 2 m_f V int w_x w_t.
inline double dG_dt_printed(const FieldIntegrals& I, const BeamParams& p, double V) noexcept
{
    return dG_dt_analytic(I, p, V) - 2.0 * p.m_f * V * I.wx_wt;
}

/// Squared norm int (w_xx^2 + w_x^2 + w_t^2), positive for any nonzero state.
inline double state_norm_sq(const FieldIntegrals& I) noexcept { return I.wxx_wxx + I.wx_wx + I.wt_wt; }

/// All functionals at one instant.
struct FunctionalSample {
    double t = 0.0;
    double E = 0.0;
    double G1 = 0.0;
    double G2 = 0.0;
    double G = 0.0;
    double Lcal = 0.0;
    double dE_dt = 0.0;
    double dG_dt = 0.0;
    double w_L = 0.0;
    double wt_L = 0.0;
    double V = 0.0;
    double V_t = 0.0;
    double norm_sq = 0.0;
    bool effective_tension_positive = true; ///< T/2 - m_f V^2 > 0
};

inline FunctionalSample evaluate_functionals(const fem::HermiteSpace& space, const State& s,
                                             const BeamParams& p, VelocitySample vel)
{
    const FieldIntegrals I = integrate_fields<4>(space, s.q, s.q_dot);
    FunctionalSample f;
    f.t = s.t;
    f.E = energy(I, p, vel.V);
    const GFunctionals g = g_functionals(I, p, vel.V);
    f.G1 = g.G1;
    f.G2 = g.G2;
    f.G = g.G;
    f.Lcal = f.E + f.G;
    f.dE_dt = dE_dt_analytic(I, p, vel.V, vel.V_t);
    f.dG_dt = dG_dt_analytic(I, p, vel.V);
    f.w_L = I.w_L;
    f.wt_L = I.wt_L;
    f.V = vel.V;
    f.V_t = vel.V_t;
    f.norm_sq = state_norm_sq(I);
    f.effective_tension_positive = 0.5 * p.T - p.m_f * vel.V * vel.V > 0.0;
    return f;
}

} // namespace pipeflex
