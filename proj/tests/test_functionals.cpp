#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "pipeflex/fem/assembly.hpp"
#include "pipeflex/functionals/functionals.hpp"
#include "pipeflex/model/constants.hpp"

using namespace pipeflex;
using std::numbers::pi;

namespace {

Eigen::VectorXd linear_field(const fem::HermiteSpace& s)
{
    return fem::interpolate(s, [](double x) { return std::pair{x, 1.0}; });
}

Eigen::VectorXd random_vector(int n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Eigen::VectorXd v(n);
    for (auto& x : v) x = g(rng);
    return v;
}

} // namespace

TEST(Energy, ZeroState)
{
    const fem::HermiteSpace s(4, 1.0);
    const auto z = Eigen::VectorXd::Zero(s.n_dofs());
    const auto I = integrate_fields(s, z, z);
    EXPECT_EQ(energy(I, fixture::params(1, 0.5, 1, 2, 0, 1), 2.0), 0.0);
}

TEST(Energy, SineModeLimit)
{
    const double L = pi;
    const auto p = fixture::params(1, 0, 1, 2, 0, L);
    double prev = 1.0;
    for (int n : {4, 8, 16, 32}) {
        const fem::HermiteSpace s(n, L);
        const auto q = fem::interpolate(s, [](double x) { return std::pair{std::sin(x), std::cos(x)}; });
        const double E = energy(integrate_fields(s, q, Eigen::VectorXd::Zero(s.n_dofs())), p, 0.0);
        const double err = std::abs(E - 3 * pi / 4);
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 1e-5);
}

TEST(Energy, QuadraticScaling)
{
    std::mt19937_64 rng(11);
    const fem::HermiteSpace s(5, 1.3);
    const auto p = fixture::params(1.2, 0.3, 0.7, 4, 0.1, 1.3);
    const auto q = random_vector(s.n_dofs(), rng);
    const auto v = random_vector(s.n_dofs(), rng);
    const double e1 = energy(integrate_fields(s, q, v), p, 1.1);
    const double e2 = energy(integrate_fields(s, Eigen::VectorXd(2 * q), Eigen::VectorXd(2 * v)), p, 1.1);
    EXPECT_NEAR(e2, 4 * e1, 1e-13 * std::abs(e1));
}

TEST(Energy, QuadratureExactAgainstEightPoints)
{
    std::mt19937_64 rng(5);
    const fem::HermiteSpace s(7, 2.0);
    const auto q = random_vector(s.n_dofs(), rng);
    const auto v = random_vector(s.n_dofs(), rng);
    const auto a = integrate_fields<4>(s, q, v);
    const auto b = integrate_fields<8>(s, q, v);
    for (auto [x, y] : {std::pair{a.w_w, b.w_w}, {a.wt_wt, b.wt_wt}, {a.wx_wx, b.wx_wx}, {a.wxx_wxx, b.wxx_wxx},
                        {a.w_wt, b.w_wt}, {a.w_wx, b.w_wx}, {a.wx_wt, b.wx_wt}})
        EXPECT_NEAR(x, y, 1e-13 * std::max(1.0, std::abs(y)));
}

TEST(Energy, MatchesMatrixQuadraticForms)
{
    std::mt19937_64 rng(8);
    const fem::HermiteSpace s(6, 1.0);
    const auto p = fixture::params(1.0, 0.4, 2.0, 5.0, 0.3, 1.0);
    const auto m = fem::assemble_constant_matrices(s, p);
    const auto q = random_vector(s.n_dofs(), rng);
    const auto v = random_vector(s.n_dofs(), rng);
    const double V = 1.7;
    const double expected = 0.5 * v.dot(m.M * v) + 0.5 * q.dot(m.K_bend * q) +
                            (0.5 * p.T - p.m_f * V * V) * q.dot(m.K_string_unit * q);
    EXPECT_NEAR(energy(integrate_fields(s, q, v), p, V), expected, 1e-12 * std::abs(expected));
}

TEST(GFunctionals, Examples)
{
    const fem::HermiteSpace s(4, 1.0);
    const auto x = linear_field(s);
    const auto z = Eigen::VectorXd::Zero(s.n_dofs());

    auto g = g_functionals(integrate_fields(s, x, z), fixture::params(1, 0, 1, 1, 0, 1), 3.0);
    EXPECT_EQ(g.G, 0.0);

    g = g_functionals(integrate_fields(s, x, x), fixture::params(3, 0, 1, 1, 0, 1), 0.0);
    EXPECT_NEAR(g.G1, 1.0, 1e-15);

    g = g_functionals(integrate_fields(s, x, z), fixture::params(1, 1, 1, 1, 0, 1), 2.0);
    EXPECT_NEAR(g.G2, 2.0, 1e-15);
    EXPECT_DOUBLE_EQ(g.G, g.G1 + g.G2);
}

TEST(Derivatives, EnergyExamples)
{
    const fem::HermiteSpace s(4, 1.0);
    const auto x = linear_field(s);
    std::mt19937_64 rng(1);
    const auto q = random_vector(s.n_dofs(), rng);
    EXPECT_EQ(dE_dt_analytic(integrate_fields(s, q, x), fixture::params(1, 0.5, 1, 1, 0, 1), 2.0, 0.0), 0.0);
    EXPECT_NEAR(dE_dt_analytic(integrate_fields(s, q, x), fixture::params(1, 0, 1, 1, 1, 1), 2.0, 0.3), -1.0 / 3,
                1e-15);
}

TEST(Derivatives, GExamples)
{
    const fem::HermiteSpace s(4, 1.0);
    const auto z = Eigen::VectorXd::Zero(s.n_dofs());
    EXPECT_EQ(dG_dt_analytic(integrate_fields(s, z, z), fixture::params(1, 0.5, 1, 1, 1, 1), 2.0), 0.0);
    std::mt19937_64 rng(2);
    for (int k = 0; k < 10; ++k) {
        const auto q = random_vector(s.n_dofs(), rng);
        EXPECT_LT(dG_dt_analytic(integrate_fields(s, q, z), fixture::params(1, 0, 1.5, 2, 0.7, 1), 0.0), 0.0);
    }
}

// Differentiating the quadratic forms along the semi-discrete equation of
// motion gives both identities exactly; only the corrected dG/dt matches.
TEST(Derivatives, ExactAlongSemiDiscreteDynamics)
{
    std::mt19937_64 rng(21);
    const fem::HermiteSpace s(6, 1.4);
    const auto p = fixture::params(1.1, 0.6, 1.3, 7.0, 0.9, 1.4);
    const auto m = fem::assemble_constant_matrices(s, p);
    const Eigen::LLT<Eigen::MatrixXd> llt(m.M);
    for (int trial = 0; trial < 5; ++trial) {
        const double V = 0.5 + trial, Vt = 0.7 - 0.4 * trial;
        const auto op = fem::assemble_time_varying(m, p, V, Vt);
        const Eigen::VectorXd q = random_vector(s.n_dofs(), rng);
        const Eigen::VectorXd v = random_vector(s.n_dofs(), rng);
        const Eigen::VectorXd a = llt.solve(-op.A_eff * v - op.K_eff * q);
        const auto I = integrate_fields(s, q, v);

        const double Teff = p.T - 2 * p.m_f * V * V;
        const double dE = v.dot(m.M * a) + q.dot(m.K_bend * v) + Teff * q.dot(m.K_string_unit * v) -
                          2 * p.m_f * V * Vt * q.dot(m.K_string_unit * q);
        EXPECT_NEAR(dE_dt_analytic(I, p, V, Vt), dE, 1e-11 * (1 + std::abs(dE)));

        const auto& N = m.K_conv_unit;
        const double dG = p.inertia() * (v.dot(m.mass_unit * v) + q.dot(m.mass_unit * a)) +
                          2 * p.m_f * Vt * q.dot(N * q) + 2 * p.m_f * V * (v.dot(N * q) + q.dot(N * v));
        EXPECT_NEAR(dG_dt_analytic(I, p, V), dG, 1e-11 * (1 + std::abs(dG)));
        EXPECT_GT(std::abs(dG_dt_printed(I, p, V) - dG), 1e-6 * (1 + std::abs(dG)));
    }
}

TEST(Samples, LyapunovIsEnergyPlusG)
{
    const auto c = fixture::damped_sinusoidal(8, 1e-3, 0.5, 50);
    const auto tr = simulate(c);
    for (const auto& f : tr.samples) {
        EXPECT_EQ(f.Lcal, f.E + f.G);
        EXPECT_TRUE(f.effective_tension_positive);
        EXPECT_GE(f.E, 0.0);
        EXPECT_GT(f.norm_sq, 0.0);
    }
}

TEST(Samples, FlagsReversedEffectiveTension)
{
    const fem::HermiteSpace s(4, 1.0);
    const auto p = fixture::params(1, 1, 1, 1, 0, 1);
    const State st{0.0, linear_field(s), Eigen::VectorXd::Zero(s.n_dofs()), Eigen::VectorXd::Zero(s.n_dofs())};
    const auto f = evaluate_functionals(s, st, p, VelocitySample{2.0, 0.0});
    EXPECT_FALSE(f.effective_tension_positive);
    EXPECT_LT(f.E, 0.0);
}

TEST(Trajectory, DerivativeIdentitiesConvergeAtSecondOrder)
{
    std::vector<double> eE, eG;
    for (double dt : {1e-3, 5e-4, 2.5e-4}) {
        const auto tr = simulate(fixture::damped_sinusoidal(4, dt, 1.0, 1));
        double mE = 0, mG = 0;
        for (std::size_t k = 1; k + 1 < tr.size(); ++k) {
            const auto& a = tr.samples[k - 1];
            const auto& b = tr.samples[k + 1];
            mE = std::max(mE, std::abs((b.E - a.E) / (2 * dt) - tr.samples[k].dE_dt));
            mG = std::max(mG, std::abs((b.G - a.G) / (2 * dt) - tr.samples[k].dG_dt));
        }
        eE.push_back(mE);
        eG.push_back(mG);
    }
    for (std::size_t i = 1; i < eE.size(); ++i) {
        EXPECT_GT(std::log2(eE[i - 1] / eE[i]), 1.8);
        EXPECT_GT(std::log2(eG[i - 1] / eG[i]), 1.8);
    }
}

TEST(Trajectory, DissipationInequalityWithoutFlow)
{
    const auto p = fixture::params(1.0, 0.0, 1.0, 10.0, 3.0, 1.0);
    const auto profile = VelocityProfile::constant(1.0, 5.0);
    const auto k = compute_decay_certificate(p, compute_bounds(profile));
    const auto tr = simulate(fixture::config(p, profile, 8, 1e-3, 5.0, 10));
    for (const auto& f : tr.samples) EXPECT_LE(f.dE_dt + f.dG_dt + k.vartheta * f.E, 1e-9 * f.E) << f.t;
}
