#pragma once

#include <cmath>
#include <numbers>
#include <variant>
#include <vector>

#include "pipeflex/error.hpp"

namespace pipeflex {

struct ZeroField {};

/// amplitude * sin(n pi x / L); satisfies f(0) = f_xx(0) = f_xx(L) = 0.
struct SineMode {
    int n = 1;
    double amplitude = 0.0;
};

/// sum_k coeffs[k] x^k; coeffs[0] must vanish so that f(0) = 0.
struct PolynomialField {
    std::vector<double> coeffs;
};

using FieldSpec = std::variant<ZeroField, SineMode, PolynomialField>;

/// slope * (x + b x^3 + g x^4) with f(0) = f_xx(0) = f_xx(L) = 0 and
/// EI f_xxx(L) = T_eff f_x(L), i.e. every boundary condition holds for a beam at
/// rest with effective tension T_eff = T - 2 m_f V(0)^2. Interpolating a
/// compatible field keeps the high-frequency content of the discrete start small.
inline PolynomialField compatible_polynomial(double EI, double T_eff, double L, double slope)
{
    if (!(EI > 0.0 && L > 0.0)) throw InvalidArgument("compatible field needs EI > 0 and L > 0");
    const double denom = 12.0 * EI * L + 2.0 * T_eff * L * L * L;
    if (!(std::abs(denom) > 0.0)) throw InvalidArgument("compatible field undefined for this tension");
    const double g = T_eff / denom;
    return {{0.0, slope, 0.0, -2.0 * g * L * slope, g * slope}};
}

struct InitialCondition {
    FieldSpec displacement = ZeroField{};
    FieldSpec velocity = ZeroField{};
};

/// Hermite nodal data of the initial state at one position.
struct InitialValues {
    double w = 0.0;
    double w_x = 0.0;
    double v = 0.0;
    double v_x = 0.0;
};

/// Value and slope of a field spec at x.
inline std::pair<double, double> eval_field(const FieldSpec& field, double L, double x)
{
    struct Visitor {
        double L, x;
        std::pair<double, double> operator()(const ZeroField&) const { return {0.0, 0.0}; }
        std::pair<double, double> operator()(const SineMode& s) const
        {
            if (s.n < 1) throw InvalidArgument("sine mode index must be >= 1");
            const double k = s.n * std::numbers::pi / L;
            return {s.amplitude * std::sin(k * x), s.amplitude * k * std::cos(k * x)};
        }
        std::pair<double, double> operator()(const PolynomialField& p) const
        {
            if (!p.coeffs.empty() && p.coeffs[0] != 0.0)
                throw InvalidArgument("invalid initial condition: polynomial must vanish at x = 0");
            double value = 0.0;
            double slope = 0.0;
            for (std::size_t k = p.coeffs.size(); k-- > 0;) {
                slope = slope * x + value;
                value = value * x + p.coeffs[k];
            }
            return {value, slope};
        }
    };
    return std::visit(Visitor{L, x}, field);
}

inline void validate(const InitialCondition& ic, double L)
{
    (void)eval_field(ic.displacement, L, 0.0);
    (void)eval_field(ic.velocity, L, 0.0);
}

inline InitialValues eval_initial_condition(const InitialCondition& ic, double L, double x)
{
    if (!(x >= 0.0 && x <= L)) throw InvalidArgument("position outside [0, L]");
    const auto [w, w_x] = eval_field(ic.displacement, L, x);
    const auto [v, v_x] = eval_field(ic.velocity, L, x);
    // w(0) = 0 holds exactly.
    return {x == 0.0 ? 0.0 : w, w_x, x == 0.0 ? 0.0 : v, v_x};
}

} // namespace pipeflex
