#pragma once

#include <Eigen/Dense>

#include <vector>

namespace lstraj {

/// Durations of the M pieces of a spline. All entries are strictly positive.
class PieceTimes {
public:
    PieceTimes() = default;
    explicit PieceTimes(Eigen::VectorXd durations);

    int size() const { return static_cast<int>(durations_.size()); }
    double operator[](int i) const { return durations_[i]; }
    const Eigen::VectorXd &durations() const { return durations_; }

    /// Cumulative time at the end of piece i (0-based), i.e. tau_{i+1}.
    double cumulative(int i) const { return cumulative_[i]; }
    double total() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

    /// Index of the piece containing t and the local time inside it.
    /// Interior junctions belong to the right piece; t == total() maps to the last piece.
    std::pair<int, double> locate(double t) const;

private:
    Eigen::VectorXd durations_;
    std::vector<double> cumulative_;
};

/// Natural monomial basis (1, t, ..., t^{size-1}) differentiated `order` times.
Eigen::VectorXd basis(double t, int order, int size);

/// Piecewise polynomial of degree 2s-1 in D spatial dimensions.
///
/// Coefficients are stored lowest degree first. All pieces live in one
/// (M*2s) x D matrix; piece i occupies rows [2s*i, 2s*(i+1)).
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(int s, PieceTimes times, Eigen::MatrixXd coefficients);

    int order() const { return s_; }
    int dim() const { return static_cast<int>(coefficients_.cols()); }
    int pieceCount() const { return times_.size(); }
    int coefficientCount() const { return 2 * s_; }
    const PieceTimes &times() const { return times_; }
    double totalDuration() const { return times_.total(); }

    const Eigen::MatrixXd &coefficients() const { return coefficients_; }
    auto piece(int i) const { return coefficients_.middleRows(2 * s_ * i, 2 * s_); }

    /// k-th derivative of piece i at local time t (no range check).
    Eigen::VectorXd evalPiece(int i, double t, int k) const;

private:
    int s_ = 0;
    PieceTimes times_;
    Eigen::MatrixXd coefficients_;
};

/// k-th derivative of the spline at global time t in [0, total duration].
Eigen::VectorXd eval(const Trajectory &traj, double t, int order);

/// Fixed part of the end-derivative description: boundary derivative stacks
/// (s x D each, row j is the j-th derivative) and the M-1 interior waypoints.
struct EndDerivativeSpec {
    Eigen::MatrixXd d0;
    Eigen::MatrixXd dM;
    Eigen::MatrixXd waypoints;

    void validate(int s, int pieceCount) const;
};

} // namespace lstraj
