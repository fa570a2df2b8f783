#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "pipeflex/error.hpp"
#include "pipeflex/fem/assembly.hpp"
#include "pipeflex/model/velocity.hpp"

namespace pipeflex {

struct SpectrumReport {
    double t = 0.0;
    std::vector<std::complex<double>> eigenvalues; ///< sorted by real part, descending
    double spectral_abscissa = 0.0;
    double characteristic_frequency = 1.0;
    bool unstable = false; ///< abscissa > 1e-8 * characteristic frequency
};

/// (pi / L) sqrt(T / rho) + (pi / L)^2 sqrt(EI / rho): string plus bending
/// frequency of the first mode, the scale for the instability threshold.
inline double characteristic_frequency(const BeamParams& p)
{
    const double k = std::numbers::pi / p.L;
    return k * std::sqrt(p.T / p.inertia()) + k * k * std::sqrt(p.EI / p.inertia());
}

inline SpectrumReport spectrum_of(const Eigen::MatrixXd& A, double omega_char = 1.0, double t = 0.0)
{
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
    if (es.info() != Eigen::Success)
        throw NumericError("eigenvalue solver did not converge at t=" + std::to_string(t) +
                           " (dimension " + std::to_string(A.rows()) + ")");
    SpectrumReport r;
    r.t = t;
    r.characteristic_frequency = omega_char;
    const auto& ev = es.eigenvalues();
    r.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    std::sort(r.eigenvalues.begin(), r.eigenvalues.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    r.spectral_abscissa = r.eigenvalues.empty() ? 0.0 : r.eigenvalues.front().real();
    r.unstable = r.spectral_abscissa > 1e-8 * omega_char;
    return r;
}

/// First-order matrix [[0, I], [-M^-1 K, -M^-1 A]] of M q'' + A q' + K q = 0.
inline Eigen::MatrixXd first_order_matrix(const Eigen::MatrixXd& M, const Eigen::MatrixXd& A,
                                          const Eigen::MatrixXd& K)
{
    const Eigen::Index n = M.rows();
    const Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success) throw NumericError("mass matrix is not positive definite");
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    S.topRightCorner(n, n).setIdentity();
    S.bottomLeftCorner(n, n) = -llt.solve(K);
    S.bottomRightCorner(n, n) = -llt.solve(A);
    return S;
}

/// Spectrum of the beam system with coefficients frozen at time t.
inline SpectrumReport frozen_spectrum(const fem::HermiteSpace& space, const BeamParams& params,
                                      const VelocityProfile& profile, double t)
{
    const auto m = fem::assemble_constant_matrices(space, params);
    const auto vel = profile.eval(t);
    const auto op = fem::assemble_time_varying(m, params, vel.V, vel.V_t);
    return spectrum_of(first_order_matrix(m.M, op.A_eff, op.K_eff), characteristic_frequency(params), t);
}

} // namespace pipeflex
