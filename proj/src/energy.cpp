#include "lstraj/energy.hpp"

#include "lstraj/errors.hpp"

#include <cmath>

namespace lstraj {

namespace {

double falling(int j, int k)
{
    double r = 1.0;
    for (int m = 0; m < k; ++m)
        r *= j - m;
    return r;
}

} // namespace

Eigen::MatrixXd q_matrix(int s, double t)
{
    if (!(t > 0.0))
        throw InvalidArgument("piece duration must be positive");
    const int n = 2 * s;
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (int i = s; i < n; ++i) {
        for (int j = s; j < n; ++j) {
            const int e = i + j - 2 * s + 1;
            q(i, j) = falling(i, s) * falling(j, s) * std::pow(t, e) / e;
        }
    }
    return q;
}

Eigen::MatrixXd h_matrix(const MappingMatrices &consts, double t)
{
    const int s = consts.s;
    const Eigen::MatrixXd ab = backward_matrix(consts, t);
    // Only the lower s rows of A_b meet the nonzero block of Q.
    const Eigen::MatrixXd q = q_matrix(s, t).bottomRightCorner(s, s);
    const auto lower = ab.bottomRows(s);
    Eigen::MatrixXd h = lower.transpose() * (q * lower);
    return 0.5 * (h + h.transpose());
}

HPartition partition(const Eigen::MatrixXd &h)
{
    const int s = static_cast<int>(h.rows() / 2);
    return {h.topLeftCorner(s, s), h.topRightCorner(s, s), h.bottomLeftCorner(s, s),
            h.bottomRightCorner(s, s)};
}

double total_cost(const Trajectory &traj)
{
    const int s = traj.order();
    double j = 0.0;
    for (int i = 0; i < traj.pieceCount(); ++i) {
        const auto c = traj.piece(i);
        const Eigen::MatrixXd q = q_matrix(s, traj.times()[i]);
        j += (c.transpose() * q * c).trace();
    }
    return j;
}

Eigen::MatrixXd grad_J_by_c(const Eigen::Ref<const Eigen::MatrixXd> &coeffs, int s, double t)
{
    return 2.0 * q_matrix(s, t) * coeffs;
}

double grad_J_by_T(const Eigen::Ref<const Eigen::MatrixXd> &coeffs, int s, double t)
{
    const Eigen::VectorXd b = basis(t, s, 2 * s);
    return (coeffs.transpose() * b).squaredNorm();
}

} // namespace lstraj
