#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace pipeflex {

/// Discrete (w, w_t) pair on a Hermite space plus the consistent acceleration.
struct State {
    double t = 0.0;
    Eigen::VectorXd q;      ///< w and w_x at the nodes (w(0) eliminated)
    Eigen::VectorXd q_dot;  ///< time derivative of q
    Eigen::VectorXd q_ddot; ///< second time derivative of q

    static State zero(int n_dofs, double t = 0.0)
    {
        const Eigen::VectorXd z = Eigen::VectorXd::Zero(n_dofs);
        return {t, z, z, z};
    }

    bool finite() const
    {
        return std::isfinite(t) && q.allFinite() && q_dot.allFinite() && q_ddot.allFinite();
    }
};

} // namespace pipeflex
