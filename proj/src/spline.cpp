#include "lstraj/spline.hpp"

#include "lstraj/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lstraj {

PieceTimes::PieceTimes(Eigen::VectorXd durations) : durations_(std::move(durations))
{
    cumulative_.reserve(durations_.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < durations_.size(); ++i) {
        const double t = durations_[i];
        if (!(t > 0.0) || !std::isfinite(t))
            throw InvalidArgument("piece " + std::to_string(i) + " has nonpositive duration");
        acc += t;
        cumulative_.push_back(acc);
    }
}

std::pair<int, double> PieceTimes::locate(double t) const
{
    if (cumulative_.empty() || t < 0.0 || t > cumulative_.back())
        throw DomainError("time " + std::to_string(t) + " outside trajectory span");
    // First piece whose end is strictly greater than t (left-closed intervals).
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), t);
    int idx = static_cast<int>(it - cumulative_.begin());
    if (idx == size())
        idx = size() - 1;
    const double start = idx == 0 ? 0.0 : cumulative_[idx - 1];
    return {idx, t - start};
}

Eigen::VectorXd basis(double t, int order, int size)
{
    Eigen::VectorXd out = Eigen::VectorXd::Zero(size);
    if (order < 0)
        throw InvalidArgument("negative derivative order");
    for (int j = order; j < size; ++j) {
        double falling = 1.0;
        for (int m = 0; m < order; ++m)
            falling *= j - m;
        out[j] = falling * std::pow(t, j - order);
    }
    return out;
}

Trajectory::Trajectory(int s, PieceTimes times, Eigen::MatrixXd coefficients)
    : s_(s), times_(std::move(times)), coefficients_(std::move(coefficients))
{
    if (s_ < 1)
        throw InvalidArgument("penalized order must be positive");
    if (coefficients_.rows() != Eigen::Index(2) * s_ * times_.size())
        throw InvalidArgument("coefficient rows do not match 2s per piece");
}

Eigen::VectorXd Trajectory::evalPiece(int i, double t, int k) const
{
    const int n = coefficientCount();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim());
    // Horner on the k-th derivative: sum_j j!/(j-k)! c_j t^{j-k}
    auto block = piece(i);
    for (int j = n - 1; j >= k; --j) {
        double falling = 1.0;
        for (int m = 0; m < k; ++m)
            falling *= j - m;
        out = out * t + falling * block.row(j).transpose();
    }
    return out;
}

Eigen::VectorXd eval(const Trajectory &traj, double t, int order)
{
    if (order < 0)
        throw InvalidArgument("negative derivative order");
    const auto [idx, local] = traj.times().locate(t);
    return traj.evalPiece(idx, local, order);
}

void EndDerivativeSpec::validate(int s, int pieceCount) const
{
    if (d0.rows() != s || dM.rows() != s)
        throw InvalidArgument("boundary derivative stacks must have s rows");
    if (d0.cols() != dM.cols())
        throw InvalidArgument("boundary stacks disagree on dimension");
    if (waypoints.rows() != pieceCount - 1)
        throw InvalidArgument("waypoint count must equal piece count minus one");
    if (pieceCount > 1 && waypoints.cols() != d0.cols())
        throw InvalidArgument("waypoint dimension differs from boundary dimension");
}

} // namespace lstraj
