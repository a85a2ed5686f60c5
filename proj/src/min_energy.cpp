#include "lstraj/min_energy.hpp"

#include "lstraj/errors.hpp"
#include "piece_kernel.hpp"

#include <string>

namespace lstraj {

void MinEnergyProblem::validate() const
{
    if (s < 2 || s > kMaxOrder)
        throw InvalidArgument("penalized order must lie in [2, 5]");
    if (times.size() < 1)
        throw InvalidArgument("at least one piece is required");
    spec.validate(s, times.size());
    if (spec.d0.cols() < 1)
        throw InvalidArgument("spatial dimension must be positive");
}

Eigen::MatrixXd fixed_junction_values(const MinEnergyProblem &problem)
{
    const int s = problem.s;
    const int m = problem.pieceCount();
    Eigen::MatrixXd kappa = Eigen::MatrixXd::Zero(Eigen::Index(m + 1) * s, problem.dim());
    kappa.topRows(s) = problem.spec.d0;
    for (int i = 1; i < m; ++i)
        kappa.row(Eigen::Index(i) * s) = problem.spec.waypoints.row(i - 1);
    kappa.bottomRows(s) = problem.spec.dM;
    return kappa;
}

namespace {

template <int S>
AssembledSystem assemble_fixed(const MinEnergyProblem &problem, const Eigen::MatrixXd &kappa)
{
    using Kernel = detail::PieceKernel<S>;
    constexpr int B = S - 1;
    const Kernel kernel(cached_constants(S));
    const int m = problem.pieceCount();
    const int dim = problem.dim();
    const int n = (m - 1) * B;

    AssembledSystem sys{BandedMatrix(n, 2 * S - 3, 2 * S - 3), Eigen::MatrixXd::Zero(n, dim)};
    BandedMatrix &mat = sys.matrix;
    typename Kernel::Square h;

    // Piece p joins junction p (start) and p+1 (end); interior junction j owns unknown block j-1.
    for (int p = 0; p < m; ++p) {
        kernel.energyMatrix(problem.times[p], h);
        const auto gamma = h.template topLeftCorner<S, S>();
        const auto lambda = h.template topRightCorner<S, S>();
        const auto phi = h.template bottomLeftCorner<S, S>();
        const auto omega = h.template bottomRightCorner<S, S>();
        const auto ka = kappa.middleRows(Eigen::Index(p) * S, S);
        const auto kb = kappa.middleRows(Eigen::Index(p + 1) * S, S);
        const bool startFree = p >= 1;
        const bool endFree = p + 1 <= m - 1;

        if (startFree) {
            const int r0 = (p - 1) * B;
            for (int i = 0; i < B; ++i)
                for (int j = 0; j < B; ++j)
                    mat(r0 + i, r0 + j) += gamma(i + 1, j + 1);
            if (endFree) {
                const int c0 = p * B;
                for (int i = 0; i < B; ++i)
                    for (int j = 0; j < B; ++j)
                        mat(r0 + i, c0 + j) += lambda(i + 1, j + 1);
            }
            sys.rhs.middleRows(r0, B).noalias() -=
                gamma.template bottomRows<B>() * ka + lambda.template bottomRows<B>() * kb;
        }
        if (endFree) {
            const int r0 = p * B;
            for (int i = 0; i < B; ++i)
                for (int j = 0; j < B; ++j)
                    mat(r0 + i, r0 + j) += omega(i + 1, j + 1);
            if (startFree) {
                const int c0 = (p - 1) * B;
                for (int i = 0; i < B; ++i)
                    for (int j = 0; j < B; ++j)
                        mat(r0 + i, c0 + j) += phi(i + 1, j + 1);
            }
            sys.rhs.middleRows(r0, B).noalias() -=
                phi.template bottomRows<B>() * ka + omega.template bottomRows<B>() * kb;
        }
    }
    return sys;
}

template <int S>
Trajectory recover_fixed(const PieceTimes &times, const Eigen::Ref<const Eigen::MatrixXd> &x,
                         double *energy)
{
    using Kernel = detail::PieceKernel<S>;
    constexpr int N = 2 * S;
    const Kernel kernel(cached_constants(S));
    const int m = times.size();
    const Eigen::Index dim = x.cols();
    Eigen::MatrixXd coeffs(Eigen::Index(m) * N, dim);
    typename Kernel::Lower l;
    typename Kernel::Block q;
    double j = 0.0;
    for (int p = 0; p < m; ++p) {
        const double t = times[p];
        kernel.lowerBackward(t, l);
        const auto d = x.middleRows(Eigen::Index(p) * S, N);
        auto c = coeffs.middleRows(Eigen::Index(p) * N, N);
        for (int i = 0; i < S; ++i)
            c.row(i) = kernel.invFactorial[i] * d.row(i);
        c.bottomRows(S).noalias() = l * d;
        if (energy) {
            kernel.qBlock(t, q);
            const auto hi = c.bottomRows(S);
            j += (hi.transpose() * q * hi).trace();
        }
    }
    if (energy)
        *energy = j;
    return Trajectory(S, times, std::move(coeffs));
}

Trajectory recover(int s, const PieceTimes &times, const Eigen::Ref<const Eigen::MatrixXd> &x,
                   double *energy)
{
    switch (s) {
    case 2: return recover_fixed<2>(times, x, energy);
    case 3: return recover_fixed<3>(times, x, energy);
    case 4: return recover_fixed<4>(times, x, energy);
    case 5: return recover_fixed<5>(times, x, energy);
    default: throw InvalidArgument("penalized order must lie in [2, 5]");
    }
}

AssembledSystem assemble_dispatch(const MinEnergyProblem &problem, const Eigen::MatrixXd &kappa)
{
    switch (problem.s) {
    case 2: return assemble_fixed<2>(problem, kappa);
    case 3: return assemble_fixed<3>(problem, kappa);
    case 4: return assemble_fixed<4>(problem, kappa);
    case 5: return assemble_fixed<5>(problem, kappa);
    default: throw InvalidArgument("penalized order must lie in [2, 5]");
    }
}

} // namespace

AssembledSystem assemble(const MinEnergyProblem &problem)
{
    problem.validate();
    if (problem.pieceCount() < 2)
        throw InvalidArgument("assembly needs at least one interior junction");
    return assemble_dispatch(problem, fixed_junction_values(problem));
}

Trajectory trajectory_from_junctions(int s, const PieceTimes &times,
                                     const Eigen::Ref<const Eigen::MatrixXd> &junctions)
{
    if (junctions.rows() != Eigen::Index(times.size() + 1) * s)
        throw InvalidArgument("junction stack must hold (M+1)s rows");
    return recover(s, times, junctions, nullptr);
}

MinEnergySolution solve_min_energy(const MinEnergyProblem &problem)
{
    problem.validate();
    const int s = problem.s;
    const int m = problem.pieceCount();
    Eigen::MatrixXd x = fixed_junction_values(problem);
    MinEnergySolution sol;
    sol.dtilde.resize(Eigen::Index(m - 1) * (s - 1), problem.dim());

    if (m > 1) {
        AssembledSystem sys = assemble_dispatch(problem, x);
        try {
            sys.matrix.factorize();
        } catch (const SingularMatrixError &e) {
            const std::size_t piece = e.pivot() / static_cast<std::size_t>(s - 1) + 1;
            throw SingularMatrixError(piece, "degenerate optimality system near piece " +
                                                 std::to_string(piece));
        }
        sys.matrix.solveInPlace(sys.rhs);
        for (int j = 1; j < m; ++j)
            x.middleRows(Eigen::Index(j) * s + 1, s - 1) =
                sys.rhs.middleRows(Eigen::Index(j - 1) * (s - 1), s - 1);
        sol.dtilde = std::move(sys.rhs);
    }
    sol.trajectory = recover(s, problem.times, x, &sol.energy);
    return sol;
}

} // namespace lstraj
