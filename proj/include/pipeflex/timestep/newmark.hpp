#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Dense>

#include "pipeflex/error.hpp"
#include "pipeflex/fem/assembly.hpp"
#include "pipeflex/model/velocity.hpp"
#include "pipeflex/timestep/state.hpp"

namespace pipeflex {

/// Average-acceleration Newmark update (beta = 1/4, gamma = 1/2) for
/// M q'' + A q' + K q = 0 with A and K frozen over the step. The equation of
/// motion is enforced on the step averages, which for frozen coefficients is
/// the classical scheme and is second order when A and K are sampled at the
/// midpoint. Solves
///   (4/dt^2 M + 2/dt A + K) q1 = (4/dt^2 M + 2/dt A - K) q0 + 4/dt M v0
/// and returns {q1, v1} with v1 = 2 (q1 - q0) / dt - v0.
struct AverageAccelerationStep {
    Eigen::VectorXd q;
    Eigen::VectorXd q_dot;
};

class AverageAccelerationSolver {
public:
    void factorize(const Eigen::MatrixXd& M, const Eigen::MatrixXd& A, const Eigen::MatrixXd& K, double dt,
                   double t_for_errors = 0.0)
    {
        lhs_ = (4.0 / (dt * dt)) * M + (2.0 / dt) * A + K;
        lu_.compute(lhs_);
        if (!(lu_.rcond() > 1e3 * std::numeric_limits<double>::epsilon()))
            throw StepFailure(t_for_errors, dt);
        Kdot2_ = 2.0 * K;
        Mdt_ = (4.0 / dt) * M;
        dt_ = dt;
    }

    AverageAccelerationStep step(const Eigen::VectorXd& q0, const Eigen::VectorXd& v0) const
    {
        const Eigen::VectorXd rhs = lhs_ * q0 - Kdot2_ * q0 + Mdt_ * v0;
        AverageAccelerationStep out;
        out.q = lu_.solve(rhs);
        out.q_dot = (2.0 / dt_) * (out.q - q0) - v0;
        return out;
    }

private:
    Eigen::MatrixXd lhs_, Kdot2_, Mdt_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    double dt_ = 0.0;
};

/// Time integrator for the beam system. Coefficients are evaluated at the
/// step midpoint; the factorization is reused while V and V_t do not change.
class NewmarkIntegrator {
public:
    NewmarkIntegrator(const fem::HermiteSpace& space, const BeamParams& params, VelocityProfile profile,
                      double dt)
    : space_(space), params_(params), profile_(std::move(profile)), dt_(dt),
      matrices_(fem::assemble_constant_matrices(space, params)), mass_llt_(matrices_.M)
    {
        if (!(std::isfinite(dt) && dt > 0.0)) throw InvalidArgument("dt must be > 0");
        if (mass_llt_.info() != Eigen::Success) throw NumericError("mass matrix is not positive definite");
    }

    const fem::SystemMatrices& matrices() const noexcept { return matrices_; }
    double dt() const noexcept { return dt_; }

    /// State with the acceleration solved from the equation of motion at s.t.
    State with_consistent_acceleration(State s) const
    {
        const VelocitySample vel = profile_.eval(s.t);
        s.q_ddot = mass_llt_.solve(-apply_A(vel, s.q_dot) - apply_K(vel, s.q));
        return s;
    }

    State step(const State& s)
    {
        const double t_mid = s.t + 0.5 * dt_;
        const VelocitySample mid = profile_.eval(t_mid);
        if (!cached_ || cached_->V != mid.V || cached_->V_t != mid.V_t) {
            const auto op = fem::assemble_time_varying(matrices_, params_, mid.V, mid.V_t);
            solver_.factorize(matrices_.M, op.A_eff, op.K_eff, dt_, s.t);
            cached_ = mid;
        }
        const auto next = solver_.step(s.q, s.q_dot);
        State out{s.t + dt_, next.q, next.q_dot, Eigen::VectorXd()};
        return with_consistent_acceleration(std::move(out));
    }

    /// Step to an explicit end time (t0 + k dt computed exactly by the caller).
    State step_to(const State& s, double t_next)
    {
        State out = step(s);
        out.t = t_next;
        return out;
    }

private:
    Eigen::VectorXd apply_A(VelocitySample vel, const Eigen::VectorXd& v) const
    {
        Eigen::VectorXd out = matrices_.C_visc * v + (4.0 * params_.m_f * vel.V) * (matrices_.G_gyro_unit * v);
        out[matrices_.tip_dof] -= 2.0 * params_.m_f * vel.V * v[matrices_.tip_dof];
        return out;
    }
    Eigen::VectorXd apply_K(VelocitySample vel, const Eigen::VectorXd& q) const
    {
        return matrices_.K_bend * q +
               (params_.T - 2.0 * params_.m_f * vel.V * vel.V) * (matrices_.K_string_unit * q) +
               (2.0 * params_.m_f * vel.V_t) * (matrices_.K_conv_unit * q);
    }

    fem::HermiteSpace space_;
    BeamParams params_;
    VelocityProfile profile_;
    double dt_;
    fem::SystemMatrices matrices_;
    Eigen::LLT<Eigen::MatrixXd> mass_llt_;
    AverageAccelerationSolver solver_;
    std::optional<VelocitySample> cached_;
};

/// One integrator step from `state`; builds the operators from scratch.
inline State newmark_step(const State& state, const fem::HermiteSpace& space, const BeamParams& params,
                          const VelocityProfile& profile, double dt)
{
    NewmarkIntegrator integrator(space, params, profile, dt);
    return integrator.step(state);
}

} // namespace pipeflex
