#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>

#include <Eigen/Dense>

#include "pipeflex/error.hpp"

namespace pipeflex::fem {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// N-point Gauss-Legendre rule on [0, 1]; exact through degree 2N - 1.
template <int N>
struct GaussRule {
    std::array<double, N> points{};
    std::array<double, N> weights{};

    GaussRule()
    {
        // Newton iteration on P_N from the Chebyshev-like initial guesses.
        for (int i = 0; i < N; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0;
                double p1 = z;
                for (int k = 2; k <= N; ++k) {
                    const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = N * (z * p1 - p0) / (z * z - 1.0);
                const double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            points[i] = 0.5 * (1.0 - z);
            weights[i] = 1.0 / ((1.0 - z * z) * dp * dp);
        }
    }

    static const GaussRule& get()
    {
        static const GaussRule rule;
        return rule;
    }
};

/// Values of the four cubic Hermite shape functions and their first three
/// derivatives at local coordinate s in [0, 1] on an element of size h.
/// Local order: w(left), w_x(left), w(right), w_x(right).
struct ShapeValues {
    std::array<double, 4> N{}, dN{}, d2N{}, d3N{};
};

inline ShapeValues hermite_shapes(double s, double h) noexcept
{
    ShapeValues v;
    const double s2 = s * s;
    const double s3 = s2 * s;
    v.N = {1.0 - 3.0 * s2 + 2.0 * s3, h * (s - 2.0 * s2 + s3), 3.0 * s2 - 2.0 * s3, h * (s3 - s2)};
    v.dN = {(-6.0 * s + 6.0 * s2) / h, 1.0 - 4.0 * s + 3.0 * s2, (6.0 * s - 6.0 * s2) / h, 3.0 * s2 - 2.0 * s};
    v.d2N = {(-6.0 + 12.0 * s) / (h * h), (-4.0 + 6.0 * s) / h, (6.0 - 12.0 * s) / (h * h), (6.0 * s - 2.0) / h};
    v.d3N = {12.0 / (h * h * h), 6.0 / (h * h), -12.0 / (h * h * h), 6.0 / (h * h)};
    return v;
}

/// Uniform C1 Hermite-cubic space on [0, L] with the essential constraint
/// w(0) = 0 eliminated. Global DOFs: node i contributes w_i and (w_x)_i, so
/// slot 2i is w_i and 2i+1 is (w_x)_i before removing slot 0.
class HermiteSpace {
public:
    static constexpr int constrained = -1;

    HermiteSpace(int n_elements, double L) : n_elements_(n_elements), L_(L)
    {
        if (n_elements < 2) throw InvalidArgument("n_elements must be >= 2");
        if (!(std::isfinite(L) && L > 0.0)) throw InvalidArgument("L must be > 0");
        h_ = L / n_elements;
    }

    int n_elements() const noexcept { return n_elements_; }
    double length() const noexcept { return L_; }
    double h() const noexcept { return h_; }
    int n_dofs() const noexcept { return 2 * (n_elements_ + 1) - 1; }

    /// Global index of local DOF `local` (0..3) of element e, or `constrained`.
    int dof(int e, int local) const noexcept { return 2 * e + local - 1; }

    std::array<int, 4> element_dofs(int e) const noexcept
    {
        return {dof(e, 0), dof(e, 1), dof(e, 2), dof(e, 3)};
    }

    int tip_displacement_dof() const noexcept { return 2 * n_elements_ - 1; }
    int tip_slope_dof() const noexcept { return 2 * n_elements_; }
    int root_slope_dof() const noexcept { return 0; }

    double node(int i) const noexcept { return i == n_elements_ ? L_ : i * h_; }

    /// Locates the element containing x and the local coordinate in it.
    std::pair<int, double> locate(double x) const noexcept
    {
        int e = static_cast<int>(std::floor(x / h_));
        e = std::clamp(e, 0, n_elements_ - 1);
        return {e, (x - node(e)) / h_};
    }

private:
    int n_elements_;
    double L_;
    double h_;
};

/// Local coefficient vector of element e from a global DOF vector.
inline Eigen::Vector4d gather(const HermiteSpace& space, const Vector& q, int e)
{
    Eigen::Vector4d local;
    for (int a = 0; a < 4; ++a) {
        const int g = space.dof(e, a);
        local[a] = g == HermiteSpace::constrained ? 0.0 : q[g];
    }
    return local;
}

/// Field value and derivatives at x: {w, w_x, w_xx, w_xxx}. w_xxx is the
/// constant third derivative of the element containing x.
inline std::array<double, 4> evaluate(const HermiteSpace& space, const Vector& q, double x)
{
    const auto [e, s] = space.locate(x);
    const auto sh = hermite_shapes(s, space.h());
    const Eigen::Vector4d c = gather(space, q, e);
    std::array<double, 4> out{};
    for (int a = 0; a < 4; ++a) {
        out[0] += sh.N[a] * c[a];
        out[1] += sh.dN[a] * c[a];
        out[2] += sh.d2N[a] * c[a];
        out[3] += sh.d3N[a] * c[a];
    }
    return out;
}

/// Hermite interpolant of a field given as a callable x -> (f(x), f_x(x)).
/// The value at x = 0 is dropped (constrained DOF).
template <class Field>
Vector interpolate(const HermiteSpace& space, Field&& field)
{
    Vector q(space.n_dofs());
    for (int i = 0; i <= space.n_elements(); ++i) {
        const auto [value, slope] = field(space.node(i));
        if (i > 0) q[2 * i - 1] = value;
        q[2 * i] = slope;
    }
    return q;
}

} // namespace pipeflex::fem
