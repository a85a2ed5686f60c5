#include "lstraj/gradients.hpp"

#include "lstraj/errors.hpp"
#include "piece_kernel.hpp"

namespace lstraj {

namespace {

template <int S>
void gradients_fixed(const Trajectory &traj, Eigen::VectorXd *dT, Eigen::MatrixXd *dq)
{
    using Kernel = detail::PieceKernel<S>;
    constexpr int N = 2 * S;
    const Kernel kernel(cached_constants(S));
    const int m = traj.pieceCount();
    const Eigen::Index dim = traj.dim();
    typename Kernel::Lower l, ldot;
    typename Kernel::Block q;

    if (dT)
        dT->resize(m);
    if (dq)
        dq->setZero(m - 1, dim);

    // Column s of A_b (end position) and column 0 (start position), lower rows only.
    Eigen::Matrix<double, S, 1> endCol, startCol;

    for (int p = 0; p < m; ++p) {
        const double t = traj.times()[p];
        const auto c = traj.piece(p);
        const auto chi = c.bottomRows(S);
        kernel.lowerBackward(t, l);
        kernel.qBlock(t, q);
        // Lower rows of dJ/dc = 2 Q c; the upper rows vanish.
        const Eigen::MatrixXd gc = 2.0 * (q * chi);

        if (dT) {
            // p^{(s)}(t) = sum_k (s+k)!/k! c_{s+k} t^k
            Eigen::RowVectorXd top = Eigen::RowVectorXd::Zero(dim);
            for (int k = S - 1; k >= 0; --k)
                top = top * t + Kernel::falling(S + k) * chi.row(k);
            const double dJdT = top.squaredNorm();

            // End derivatives d = A_f(t) c, then the derivative of A_b applied to them.
            Eigen::Matrix<double, N, Eigen::Dynamic> d(N, dim);
            for (int k = 0; k < S; ++k) {
                d.row(k) = c.row(k) / kernel.invFactorial[k];
                d.row(S + k) = traj.evalPiece(p, t, k).transpose();
            }
            for (int i = 0; i < S; ++i)
                for (int j = 0; j < S; ++j) {
                    const int e = j - i - S;
                    ldot(i, j) = l(i, j) * e / t;
                    ldot(i, S + j) = l(i, S + j) * e / t;
                }
            (*dT)[p] = dJdT + (gc.array() * (ldot * d).array()).sum();
        }
        if (dq) {
            endCol = l.col(S);
            startCol = l.col(0);
            if (p >= 1)
                dq->row(p - 1) += startCol.transpose() * gc;
            if (p + 1 <= m - 1)
                dq->row(p) += endCol.transpose() * gc;
        }
    }
}

void dispatch(const MinEnergySolution &sol, Eigen::VectorXd *dT, Eigen::MatrixXd *dq)
{
    const Trajectory &traj = sol.trajectory;
    switch (traj.order()) {
    case 2: return gradients_fixed<2>(traj, dT, dq);
    case 3: return gradients_fixed<3>(traj, dT, dq);
    case 4: return gradients_fixed<4>(traj, dT, dq);
    case 5: return gradients_fixed<5>(traj, dT, dq);
    default: throw InvalidArgument("penalized order must lie in [2, 5]");
    }
}

} // namespace

Eigen::VectorXd grad_times(const MinEnergySolution &solution)
{
    Eigen::VectorXd dT;
    dispatch(solution, &dT, nullptr);
    return dT;
}

Eigen::MatrixXd grad_waypoints(const MinEnergySolution &solution)
{
    Eigen::MatrixXd dq;
    dispatch(solution, nullptr, &dq);
    return dq;
}

ParameterGradient parameter_gradient(const MinEnergySolution &solution)
{
    ParameterGradient g;
    dispatch(solution, &g.dT, &g.dq);
    return g;
}

} // namespace lstraj
