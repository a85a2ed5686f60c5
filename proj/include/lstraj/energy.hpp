#pragma once

#include "lstraj/ddp_map.hpp"
#include "lstraj/spline.hpp"

#include <Eigen/Dense>

namespace lstraj {

/// Gram matrix of the s-th derivative of the monomial basis over [0, t].
/// Rows and columns below degree s are zero.
Eigen::MatrixXd q_matrix(int s, double t);

/// Energy of a piece in end-derivative form: A_b(t)^T Q(t) A_b(t).
Eigen::MatrixXd h_matrix(const MappingMatrices &consts, double t);

/// Four s x s blocks of an H matrix: [Gamma Lambda; Phi Omega].
struct HPartition {
    Eigen::MatrixXd gamma, lambda, phi, omega;
};

HPartition partition(const Eigen::MatrixXd &h);

/// Integral of the squared s-th derivative over the whole trajectory, summed over dimensions.
double total_cost(const Trajectory &traj);

/// Gradient of c^T Q(t) c with respect to the coefficients of one piece.
/// `coeffs` is 2s x D; the result has the same shape.
Eigen::MatrixXd grad_J_by_c(const Eigen::Ref<const Eigen::MatrixXd> &coeffs, int s, double t);

/// Derivative of one piece's energy with respect to its duration,
/// p^{(s)}(t)^2 summed over dimensions.
double grad_J_by_T(const Eigen::Ref<const Eigen::MatrixXd> &coeffs, int s, double t);

} // namespace lstraj
