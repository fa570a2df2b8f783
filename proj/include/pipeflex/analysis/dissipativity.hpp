#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <numbers>
#include <random>
#include <vector>

#include "pipeflex/error.hpp"
#include "pipeflex/fem/assembly.hpp"
#include "pipeflex/fem/hermite.hpp"
#include "pipeflex/functionals/functionals.hpp"
#include "pipeflex/model/params.hpp"

namespace pipeflex {

/// Weights of the time-dependent inner product
///   <(w1, v1), (w2, v2)>_t = alpha int w1_xx w2_xx + beta(t) int w1_x w2_x + gamma int v1 v2.
struct WeightedInnerProduct {
    double alpha = 0.0; ///< EI / (2 m_f)
    double beta = 0.0;  ///< (T - 2 m_f V^2) / (2 m_f)
    double gamma = 0.0; ///< (m_p + 2 m_f) / (2 m_f)

    static WeightedInnerProduct at(const BeamParams& p, double V)
    {
        if (!(p.m_f > 0.0))
            throw CertificateError(CertificateError::Kind::Inapplicable,
                                   "weighted inner product needs m_f > 0");
        const double two_mf = 2.0 * p.m_f;
        return {p.EI / two_mf, (p.T - two_mf * V * V) / two_mf, p.inertia() / two_mf};
    }
};

struct DissipativityResult {
    /// <f, A0 f>_t with the tip shear flux taken from the discrete field
    /// itself; equals -v(L) R_L / (2 m_f) with R_L the dynamical BC residual.
    double residual = 0.0;
    /// Same pairing with the flux supplied by the boundary condition (the
    /// Galerkin operator); vanishes up to rounding.
    double galerkin_residual = 0.0;
    double norm_sq = 0.0; ///< ||f||_t^2
};

/// Discrete analogue of <f, A0(t) f>_t for f = (w, v) given by Hermite DOFs
/// (q, p). The second component of A0 f is represented by its Galerkin
/// projection u:
///   rho M0 u = -EI K_b q - (T - 2 m_f V^2) K_s q - 4 m_f V N p + flux e_L.
inline DissipativityResult dissipativity_residual(const fem::HermiteSpace& space, const BeamParams& params, double V,
                                                  const fem::Vector& q, const fem::Vector& p)
{
    const auto ip = WeightedInnerProduct::at(params, V);
    const auto m = fem::assemble_constant_matrices(space, params);
    const double Teff = params.T - 2.0 * params.m_f * V * V;
    const fem::Matrix K_b_unit = m.K_bend / params.EI;
    const fem::Vector interior = -params.EI * (K_b_unit * q) - Teff * (m.K_string_unit * q) -
                                 4.0 * params.m_f * V * (m.G_gyro_unit * p);
    const int tip = space.tip_displacement_dof();
    const auto w_tip = fem::evaluate(space, q, space.length());
    const double strong_flux = -params.EI * w_tip[3] + Teff * w_tip[1];
    const double weak_flux = 2.0 * params.m_f * V * p[tip];

    const double w_part = ip.alpha * q.dot(K_b_unit * p) + ip.beta * q.dot(m.K_string_unit * p);
    // gamma p^T M0 u = (gamma / rho) p^T (rho M0 u)
    const double scale = ip.gamma / params.inertia();
    DissipativityResult r;
    r.residual = w_part + scale * (p.dot(interior) + p[tip] * strong_flux);
    r.galerkin_residual = w_part + scale * (p.dot(interior) + p[tip] * weak_flux);
    const auto I = integrate_fields(space, q, p);
    r.norm_sq = ip.alpha * I.wxx_wxx + ip.beta * I.wx_wx + ip.gamma * I.wt_wt;
    return r;
}

/// Smooth pair (w, v) in the domain of A0(t):
///   w = theta x + sum a_k sin(k pi x / L),   v = sum b_k sin(k pi x / L) + s x / L,
/// with s chosen so that EI w_xxx(L) - (T - 2 m_f V^2) w_x(L) + 2 m_f V v(L) = 0.
struct AdmissibleTrialField {
    double L = 1.0;
    double theta = 0.0;
    std::vector<double> a, b;
    double s = 0.0;

    static AdmissibleTrialField random(const BeamParams& p, double V, std::mt19937_64& rng, int modes = 4)
    {
        if (!(p.m_f > 0.0) || V == 0.0)
            throw InvalidArgument("admissible trial field needs m_f > 0 and V != 0");
        std::normal_distribution<double> g;
        AdmissibleTrialField f;
        f.L = p.L;
        f.theta = g(rng);
        for (int k = 1; k <= modes; ++k) {
            // Decaying spectrum keeps the field smooth.
            f.a.push_back(g(rng) / (k * k * k));
            f.b.push_back(g(rng) / (k * k));
        }
        const double Teff = p.T - 2.0 * p.m_f * V * V;
        const auto tip = f.displacement(p.L);
        f.s = (-p.EI * tip[3] + Teff * tip[1]) / (2.0 * p.m_f * V);
        return f;
    }

    /// {w, w_x, w_xx, w_xxx}
    std::array<double, 4> displacement(double x) const
    {
        std::array<double, 4> out{theta * x, theta, 0.0, 0.0};
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double k = (i + 1) * std::numbers::pi / L;
            const double sn = std::sin(k * x), cs = std::cos(k * x);
            out[0] += a[i] * sn;
            out[1] += a[i] * k * cs;
            out[2] -= a[i] * k * k * sn;
            out[3] -= a[i] * k * k * k * cs;
        }
        return out;
    }

    /// {v, v_x}
    std::pair<double, double> velocity(double x) const
    {
        double v = s * x / L, vx = s / L;
        for (std::size_t i = 0; i < b.size(); ++i) {
            const double k = (i + 1) * std::numbers::pi / L;
            v += b[i] * std::sin(k * x);
            vx += b[i] * k * std::cos(k * x);
        }
        return {v, vx};
    }

    std::pair<fem::Vector, fem::Vector> interpolate(const fem::HermiteSpace& space) const
    {
        fem::Vector q = fem::interpolate(space, [&](double x) {
            const auto d = displacement(x);
            return std::pair{d[0], d[1]};
        });
        fem::Vector p = fem::interpolate(space, [&](double x) { return velocity(x); });
        return {std::move(q), std::move(p)};
    }
};

struct PoincareCheck {
    double lhs = 0.0; ///< int v^2
    double rhs = 0.0; ///< P int v_x^2
    bool holds = true;
};

/// int v^2 <= (L^2 / 2) int v_x^2 for a Hermite field (v(0) = 0 by construction).
inline PoincareCheck poincare_check(const fem::HermiteSpace& space, const fem::Vector& v)
{
    if (v.size() != space.n_dofs()) throw InvalidArgument("DOF vector does not match the space");
    const auto I = integrate_fields(space, v, fem::Vector::Zero(space.n_dofs()));
    PoincareCheck c;
    c.lhs = I.w_w;
    c.rhs = 0.5 * space.length() * space.length() * I.wx_wx;
    c.holds = c.lhs <= c.rhs * (1.0 + 1e-12);
    return c;
}

/// Same check on the Hermite interpolant of a field x -> (v, v_x).
template <class Field>
    requires requires(Field& f) { f(0.0).first; }
PoincareCheck poincare_check(const fem::HermiteSpace& space, Field&& field)
{
    if (field(0.0).first != 0.0) throw InvalidArgument("Poincare check needs v(0) = 0");
    return poincare_check(space, fem::interpolate(space, field));
}

} // namespace pipeflex
