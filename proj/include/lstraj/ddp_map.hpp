#pragma once

#include <Eigen/Dense>

namespace lstraj {

// Maximum supported penalized order. Binomials and factorials used by the
// structural constants stay exact in 64-bit integers up to this bound.
inline constexpr int kMaxOrder = 5;

/// Time-independent blocks of the coefficient <-> end-derivative maps.
///
/// With 0-based indices i, j in [0, s):
///   E_ii = i!,  F_ij = j!/(j-i)! (i <= j),  G_ij = (s+j)!/(s+j-i)!
///   U_ii = 1/i!,  V and W from the closed-form binomial sums.
/// The forward map A_f(t) takes the 2s coefficients of a piece to
/// (p(0), ..., p^{(s-1)}(0), p(t), ..., p^{(s-1)}(t)); A_b(t) is its inverse.
struct MappingMatrices {
    int s = 0;
    Eigen::MatrixXd E, F, G, U, V, W;
};

MappingMatrices structural_constants(int s);

/// Process-wide copy of structural_constants(s), built on first use.
const MappingMatrices &cached_constants(int s);

Eigen::MatrixXd forward_matrix(const MappingMatrices &consts, double t);
Eigen::MatrixXd backward_matrix(const MappingMatrices &consts, double t);

/// Entrywise time derivative of backward_matrix.
Eigen::MatrixXd backward_matrix_dt(const MappingMatrices &consts, double t);

} // namespace lstraj
