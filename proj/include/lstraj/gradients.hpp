#pragma once

#include "lstraj/min_energy.hpp"

#include <Eigen/Dense>

namespace lstraj {

/// Gradient of the optimal energy with respect to problem parameters.
struct ParameterGradient {
    Eigen::VectorXd dT; ///< M entries
    Eigen::MatrixXd dq; ///< (M-1) x D
};

/// d(optimal energy)/dT_i from the solved trajectory alone. Relies on the
/// solution being stationary in the free interior derivatives.
Eigen::VectorXd grad_times(const MinEnergySolution &solution);

/// d(optimal energy)/dq_i; the two pieces adjacent to each waypoint contribute.
Eigen::MatrixXd grad_waypoints(const MinEnergySolution &solution);

ParameterGradient parameter_gradient(const MinEnergySolution &solution);

} // namespace lstraj
