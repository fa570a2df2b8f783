#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "pipeflex/analysis/dissipativity.hpp"
#include "pipeflex/model/initial_condition.hpp"
#include "pipeflex/timestep/simulate.hpp"

namespace pipeflex {

struct VerificationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace detail {

inline std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

inline BeamParams beam(double m_p, double m_f, double EI, double T, double c, double L)
{
    BeamParams p;
    p.m_p = m_p;
    p.m_f = m_f;
    p.EI = EI;
    p.T = T;
    p.c = c;
    p.L = L;
    return p;
}

inline VerificationCheck verify_poincare()
{
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> ne(2, 40);
    std::uniform_real_distribution<double> len(0.1, 10.0);
    int violations = 0;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const fem::HermiteSpace s(ne(rng), len(rng));
        fem::Vector v(s.n_dofs());
        for (auto& x : v) x = g(rng);
        const auto c = poincare_check(s, v);
        violations += !c.holds;
        worst = std::max(worst, c.lhs / c.rhs);
    }
    return {"poincare", violations == 0,
            "1000 random fields, " + std::to_string(violations) + " violations, max lhs/rhs " + num(worst)};
}

inline VerificationCheck verify_conservation()
{
    SimulationConfig c;
    c.params = beam(1.0, 0.3, 1.0, 10.0, 0.0, 1.0);
    c.profile = VelocityProfile::constant(1.5, 10.0);
    c.ic.displacement = SineMode{1, 0.1};
    c.n_elements = 32;
    c.dt = 1e-3;
    c.t_end = 10.0;
    c.output_stride = 10;
    c.keep_states = false;
    const auto tr = simulate(c);
    const double E0 = tr.samples.front().E;
    double drift = 0.0;
    for (const auto& s : tr.samples) drift = std::max(drift, std::abs(s.E - E0) / E0);
    return {"conservation", drift <= 1e-6, "undamped constant flow, max relative drift " + num(drift)};
}

inline VerificationCheck verify_dissipativity()
{
    std::mt19937_64 rng(7);
    const auto p = beam(1.0, 0.5, 1.0, 30.0, 0.0, 1.0);
    const double V = 2.0;
    bool ok = true;
    double worst_order = 1e300;
    for (int trial = 0; trial < 5; ++trial) {
        const auto field = AdmissibleTrialField::random(p, V, rng);
        double prev = 0.0;
        for (int n : {8, 16, 32, 64}) {
            const fem::HermiteSpace s(n, p.L);
            const auto [q, v] = field.interpolate(s);
            const auto r = dissipativity_residual(s, p, V, q, v);
            const double rel = std::abs(r.residual) / r.norm_sq;
            if (n > 8) {
                ok = ok && rel < prev;
                worst_order = std::min(worst_order, std::log2(prev / rel));
            }
            prev = rel;
        }
    }
    return {"dissipativity", ok, "residual / norm^2 over n = 8..64, worst per-level order " + num(worst_order)};
}

inline VerificationCheck verify_energy_rate()
{
    const auto p = beam(1.0, 0.5, 1.0, 30.0, 3.0, 1.0);
    std::vector<double> err;
    for (double dt : {1e-3, 5e-4, 2.5e-4}) {
        SimulationConfig c;
        c.params = p;
        c.profile = VelocityProfile::sinusoidal(2.0, 1.0, 2.0 * std::numbers::pi, 1.0);
        c.ic.displacement = compatible_polynomial(p.EI, p.T - 2.0 * p.m_f * 4.0, p.L, 0.1);
        c.n_elements = 4;
        c.dt = dt;
        c.t_end = 1.0;
        c.output_stride = 1;
        c.keep_states = false;
        const auto tr = simulate(c);
        double m = 0.0;
        for (std::size_t k = 1; k + 1 < tr.size(); ++k)
            m = std::max(m, std::abs((tr.samples[k + 1].E - tr.samples[k - 1].E) / (2 * dt) - tr.samples[k].dE_dt));
        err.push_back(m);
    }
    const double o1 = std::log2(err[0] / err[1]), o2 = std::log2(err[1] / err[2]);
    return {"energy_rate", o1 >= 1.8 && o2 >= 1.8,
            "centered-difference dE/dt vs analytic, observed orders " + num(o1) + ", " + num(o2)};
}

} // namespace detail

/// Built-in oracle suite: Poincare inequality, energy conservation,
/// dissipativity under refinement, dE/dt consistency.
inline std::vector<VerificationCheck> run_verification()
{
    std::vector<VerificationCheck> out;
    for (auto f : {detail::verify_poincare, detail::verify_conservation, detail::verify_dissipativity,
                   detail::verify_energy_rate}) {
        try {
            out.push_back(f());
        } catch (const std::exception& e) {
            out.push_back({"error", false, e.what()});
        }
    }
    return out;
}

} // namespace pipeflex
