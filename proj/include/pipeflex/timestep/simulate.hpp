#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "pipeflex/error.hpp"
#include "pipeflex/fem/hermite.hpp"
#include "pipeflex/functionals/functionals.hpp"
#include "pipeflex/model/initial_condition.hpp"
#include "pipeflex/model/params.hpp"
#include "pipeflex/model/velocity.hpp"
#include "pipeflex/timestep/newmark.hpp"

namespace pipeflex {

struct SimulationConfig {
    BeamParams params;
    VelocityProfile profile = VelocityProfile::constant(1.0, 1.0);
    InitialCondition ic;
    int n_elements = 32;
    double dt = 1e-3;
    double t_end = 10.0;
    int output_stride = 10;
    bool keep_states = true;

    void validate() const
    {
        params.validate();
        if (n_elements < 2) throw InvalidArgument("n_elements must be >= 2");
        if (!(std::isfinite(dt) && dt > 0.0)) throw InvalidArgument("dt must be > 0");
        if (!(std::isfinite(t_end) && t_end > dt)) throw InvalidArgument("t_end must exceed dt");
        if (output_stride < 1) throw InvalidArgument("output_stride must be >= 1");
        if (profile.kind() == VelocityKind::SplineTable) {
            const auto& table = std::get<SplineTableVelocity>(profile.spec());
            if (table.times.back() < t_end * (1.0 - 1e-12))
                throw InvalidArgument("spline table ends before t_end");
        }
        pipeflex::validate(ic, params.L);
    }

    long long n_steps() const { return static_cast<long long>(std::ceil(t_end / dt - 1e-9)); }
};

namespace detail {

inline void append_number(std::string& out, double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
}

inline void append_field(std::string& out, const char* name, const FieldSpec& f)
{
    out += name;
    out += '=';
    if (std::holds_alternative<ZeroField>(f)) {
        out += "zero";
    } else if (const auto* s = std::get_if<SineMode>(&f)) {
        out += "sine:" + std::to_string(s->n) + ':';
        append_number(out, s->amplitude);
    } else {
        out += "polynomial";
        for (double c : std::get<PolynomialField>(f).coeffs) {
            out += ':';
            append_number(out, c);
        }
    }
    out += '\n';
}

} // namespace detail

/// Canonical text of every field that influences a simulation.
inline std::string canonical_text(const SimulationConfig& c)
{
    std::string out;
    auto kv = [&](const char* key, double v) {
        out += key;
        out += '=';
        detail::append_number(out, v);
        out += '\n';
    };
    kv("m_p", c.params.m_p);
    kv("m_f", c.params.m_f);
    kv("EI", c.params.EI);
    kv("T", c.params.T);
    kv("c", c.params.c);
    kv("L", c.params.L);
    out += std::string("velocity=") + to_string(c.profile.kind()) + '\n';
    kv("horizon", c.profile.horizon());
    std::visit(
        [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, ConstantVelocity>) {
                kv("V0", s.V0);
            } else if constexpr (std::is_same_v<S, SinusoidalVelocity>) {
                kv("V0", s.V0);
                kv("A", s.amplitude);
                kv("omega", s.omega);
            } else if constexpr (std::is_same_v<S, SmoothRampVelocity>) {
                kv("V_start", s.V_start);
                kv("V_end", s.V_end);
                kv("ramp_start", s.ramp_start);
                kv("ramp_end", s.ramp_end);
            } else {
                for (std::size_t i = 0; i < s.times.size(); ++i) {
                    kv("knot_t", s.times[i]);
                    kv("knot_V", s.values[i]);
                }
            }
        },
        c.profile.spec());
    detail::append_field(out, "w", c.ic.displacement);
    detail::append_field(out, "v", c.ic.velocity);
    out += "n_elements=" + std::to_string(c.n_elements) + '\n';
    kv("dt", c.dt);
    kv("t_end", c.t_end);
    out += "output_stride=" + std::to_string(c.output_stride) + '\n';
    return out;
}

/// 64-bit FNV-1a digest as 16 lowercase hex digits.
inline std::string fingerprint(const std::string& text)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct TrajectoryMetadata {
    int n_elements = 0;
    double h = 0.0;
    double dt = 0.0;
    double t_end = 0.0;
    int output_stride = 1;
    BeamParams params;
    VelocityKind profile_kind = VelocityKind::Constant;
    std::string config_hash;
};

/// Decimated output of a simulation. samples[i] and states[i] (when kept)
/// belong to the same instant; times are k * stride * dt.
struct Trajectory {
    TrajectoryMetadata meta;
    std::vector<FunctionalSample> samples;
    std::vector<State> states;

    std::size_t size() const noexcept { return samples.size(); }
};

/// Non-finite state encountered. Carries the samples recorded before blow-up.
class DivergenceError : public NumericError {
public:
    DivergenceError(double t, Trajectory partial)
    : NumericError("solution diverged at t=" + std::to_string(t)), t_(t), partial_(std::move(partial)) {}
    double time() const noexcept { return t_; }
    const Trajectory& partial() const noexcept { return partial_; }

private:
    double t_;
    Trajectory partial_;
};

/// Hermite interpolation of the initial condition onto the space.
inline State project_initial_condition(const fem::HermiteSpace& space, const InitialCondition& ic)
{
    const double L = space.length();
    State s;
    s.t = 0.0;
    s.q = fem::interpolate(space, [&](double x) { return eval_field(ic.displacement, L, x); });
    s.q_dot = fem::interpolate(space, [&](double x) { return eval_field(ic.velocity, L, x); });
    s.q_ddot = Eigen::VectorXd::Zero(space.n_dofs());
    return s;
}

inline Trajectory simulate(const SimulationConfig& config)
{
    config.validate();
    const fem::HermiteSpace space(config.n_elements, config.params.L);
    NewmarkIntegrator integrator(space, config.params, config.profile, config.dt);

    Trajectory traj;
    traj.meta.n_elements = config.n_elements;
    traj.meta.h = space.h();
    traj.meta.dt = config.dt;
    traj.meta.t_end = config.t_end;
    traj.meta.output_stride = config.output_stride;
    traj.meta.params = config.params;
    traj.meta.profile_kind = config.profile.kind();
    traj.meta.config_hash = fingerprint(canonical_text(config));

    auto record = [&](const State& s) {
        traj.samples.push_back(evaluate_functionals(space, s, config.params, config.profile.eval(s.t)));
        if (config.keep_states) traj.states.push_back(s);
    };

    State state = integrator.with_consistent_acceleration(project_initial_condition(space, config.ic));
    record(state);
    const long long steps = config.n_steps();
    for (long long k = 1; k <= steps; ++k) {
        state = integrator.step_to(state, static_cast<double>(k) * config.dt);
        const bool sample = k % config.output_stride == 0;
        if (!state.finite()) throw DivergenceError(state.t, std::move(traj));
        if (sample) {
            record(state);
            const auto& f = traj.samples.back();
            if (!(std::isfinite(f.E) && std::isfinite(f.G) && std::isfinite(f.norm_sq))) {
                traj.samples.pop_back();
                if (config.keep_states) traj.states.pop_back();
                throw DivergenceError(state.t, std::move(traj));
            }
        }
    }
    return traj;
}

} // namespace pipeflex
