#pragma once

#include <Eigen/Dense>

#include "pipeflex/fem/hermite.hpp"
#include "pipeflex/model/params.hpp"

namespace pipeflex::fem {

/// Element integrals of the Hermite shape functions on [0, h], integrated
/// with an N-point Gauss rule (N = 4 is exact for every block).
struct ElementMatrices {
    Eigen::Matrix4d mass;       ///< int N_a N_b
    Eigen::Matrix4d bending;    ///< int N_a'' N_b''
    Eigen::Matrix4d string;     ///< int N_a' N_b'
    Eigen::Matrix4d convective; ///< int N_a N_b'  (row: test, column: trial)
};

template <int Q = 4>
ElementMatrices element_matrices(double h)
{
    const auto& rule = GaussRule<Q>::get();
    ElementMatrices m;
    m.mass.setZero();
    m.bending.setZero();
    m.string.setZero();
    m.convective.setZero();
    for (int g = 0; g < Q; ++g) {
        const auto sh = hermite_shapes(rule.points[g], h);
        const double w = rule.weights[g] * h;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                m.mass(a, b) += w * sh.N[a] * sh.N[b];
                m.bending(a, b) += w * sh.d2N[a] * sh.d2N[b];
                m.string(a, b) += w * sh.dN[a] * sh.dN[b];
                m.convective(a, b) += w * sh.N[a] * sh.dN[b];
            }
    }
    return m;
}

/// Constant global blocks of the semi-discrete system
///   M q'' + (C + 4 m_f V G - 2 m_f V e_L e_L^T) q' + (K_b + (T - 2 m_f V^2) K_s + 2 m_f V_t K_c) q = 0.
/// The *_unit blocks carry no physical coefficient.
struct SystemMatrices {
    Matrix mass_unit;     ///< int phi_i phi_j
    Matrix M;             ///< (m_p + 2 m_f) mass_unit
    Matrix C_visc;        ///< c mass_unit
    Matrix K_bend;        ///< EI int phi_i'' phi_j''
    Matrix K_string_unit; ///< int phi_i' phi_j'
    Matrix K_conv_unit;   ///< int phi_i phi_j'
    Matrix G_gyro_unit;   ///< int phi_i phi_j' (acts on q')
    int tip_dof = 0;      ///< w(L) DOF carrying the boundary term -e_L e_L^T
};

inline Matrix assemble_global(const HermiteSpace& space, const Eigen::Matrix4d& local)
{
    const int n = space.n_dofs();
    Matrix out = Matrix::Zero(n, n);
    for (int e = 0; e < space.n_elements(); ++e) {
        const auto dofs = space.element_dofs(e);
        for (int a = 0; a < 4; ++a) {
            if (dofs[a] == HermiteSpace::constrained) continue;
            for (int b = 0; b < 4; ++b) {
                if (dofs[b] == HermiteSpace::constrained) continue;
                out(dofs[a], dofs[b]) += local(a, b);
            }
        }
    }
    return out;
}

inline SystemMatrices assemble_constant_matrices(const HermiteSpace& space, const BeamParams& params)
{
    const ElementMatrices el = element_matrices<4>(space.h());
    SystemMatrices m;
    m.mass_unit = assemble_global(space, el.mass);
    m.M = params.inertia() * m.mass_unit;
    m.C_visc = params.c * m.mass_unit;
    m.K_bend = params.EI * assemble_global(space, el.bending);
    m.K_string_unit = assemble_global(space, el.string);
    m.K_conv_unit = assemble_global(space, el.convective);
    m.G_gyro_unit = m.K_conv_unit;
    m.tip_dof = space.tip_displacement_dof();
    return m;
}

/// Damping-like operator acting on q' and stiffness-like operator acting on q
/// at one instant.
struct TimeVaryingOperators {
    Matrix A_eff;
    Matrix K_eff;
};

inline TimeVaryingOperators assemble_time_varying(const SystemMatrices& m, const BeamParams& params,
                                                  double V, double V_t)
{
    TimeVaryingOperators op;
    op.A_eff = m.C_visc + (4.0 * params.m_f * V) * m.G_gyro_unit;
    op.A_eff(m.tip_dof, m.tip_dof) -= 2.0 * params.m_f * V;
    op.K_eff = m.K_bend + (params.T - 2.0 * params.m_f * V * V) * m.K_string_unit +
               (2.0 * params.m_f * V_t) * m.K_conv_unit;
    return op;
}

/// Dynamical boundary-condition residual at x = L,
///   EI w_xxx(L) - (T - 2 m_f V^2) w_x(L) + 2 m_f V w_t(L),
/// with w_xxx taken as the constant third derivative on the last element.
/// The weak form enforces this condition only in the limit h -> 0.
inline double boundary_residual(const HermiteSpace& space, const Vector& q, const Vector& q_dot,
                                const BeamParams& params, double V)
{
    const auto tip = evaluate(space, q, space.length());
    const double wt_L = q_dot[space.tip_displacement_dof()];
    return params.EI * tip[3] - (params.T - 2.0 * params.m_f * V * V) * tip[1] +
           2.0 * params.m_f * V * wt_L;
}

} // namespace pipeflex::fem
