#pragma once

#include "lstraj/banded_matrix.hpp"
#include "lstraj/ddp_map.hpp"
#include "lstraj/spline.hpp"

#include <Eigen/Dense>

namespace lstraj {

/// Minimum s-th-derivative-energy problem through fixed waypoints with
/// fully pinned boundary derivatives at both ends.
struct MinEnergyProblem {
    int s = 3;
    EndDerivativeSpec spec;
    PieceTimes times;

    int dim() const { return static_cast<int>(spec.d0.cols()); }
    int pieceCount() const { return times.size(); }
    void validate() const;
};

struct MinEnergySolution {
    Trajectory trajectory;
    /// Interior derivatives of orders 1..s-1, junction-major: (M-1)(s-1) x D.
    Eigen::MatrixXd dtilde;
    double energy = 0.0;
};

/// Block-tridiagonal optimality system for the unknown interior derivatives.
struct AssembledSystem {
    BandedMatrix matrix;
    Eigen::MatrixXd rhs;
};

/// Fixed junction values: row block i (s rows) is kappa_i, i = 0..M.
Eigen::MatrixXd fixed_junction_values(const MinEnergyProblem &problem);

/// Builds the banded system M * dtilde = b directly from per-piece H blocks.
/// Requires at least two pieces.
AssembledSystem assemble(const MinEnergyProblem &problem);

MinEnergySolution solve_min_energy(const MinEnergyProblem &problem);

/// Rebuilds coefficients from the full junction derivative stack ((M+1)s x D),
/// using c_i = A_b(T_i) d_i.
Trajectory trajectory_from_junctions(int s, const PieceTimes &times,
                                     const Eigen::Ref<const Eigen::MatrixXd> &junctions);

} // namespace lstraj
