#pragma once

#include <cmath>
#include <string>

#include "pipeflex/error.hpp"

namespace pipeflex {

/// Physical constants of the pipe and the conveyed fluid (SI units).
struct BeamParams {
    double m_p = 1.0; ///< pipe mass per unit length [kg/m]
    double m_f = 0.0; ///< fluid mass per unit length [kg/m]
    double EI = 1.0;  ///< bending stiffness [N m^2]
    double T = 1.0;   ///< tension [N]
    double c = 0.0;   ///< viscous damping [N s/m^2]
    double L = 1.0;   ///< length [m]

    /// Total mass per unit length m_p + 2 m_f, the inertia coefficient of the beam equation.
    double inertia() const noexcept { return m_p + 2.0 * m_f; }

    /// Throws InvalidArgument naming the offending field.
    void validate() const
    {
        auto need = [](bool ok, const char* field, const char* rule) {
            if (!ok) throw InvalidArgument(std::string(field) + " must be " + rule);
        };
        need(std::isfinite(m_p) && m_p > 0.0, "m_p", "> 0");
        need(std::isfinite(m_f) && m_f >= 0.0, "m_f", ">= 0");
        need(std::isfinite(EI) && EI > 0.0, "EI", "> 0");
        need(std::isfinite(T) && T > 0.0, "T", "> 0");
        need(std::isfinite(c) && c >= 0.0, "c", ">= 0");
        need(std::isfinite(L) && L > 0.0, "L", "> 0");
    }
};

} // namespace pipeflex
