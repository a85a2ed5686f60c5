#include "lstraj/energy.hpp"
#include "lstraj/errors.hpp"
#include "lstraj/min_energy.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <chrono>
#include <random>

using namespace lstraj;

namespace {

MinEnergyProblem rest_to_rest_1d()
{
    MinEnergyProblem p;
    p.s = 2;
    p.spec.d0 = Eigen::MatrixXd::Zero(2, 1);
    p.spec.dM = Eigen::MatrixXd::Zero(2, 1);
    p.spec.dM(0, 0) = 1.0;
    p.spec.waypoints = Eigen::MatrixXd(0, 1);
    p.times = PieceTimes(Eigen::VectorXd::Ones(1));
    return p;
}

// Junction stack of the solved trajectory: (M+1)s rows.
Eigen::MatrixXd junctions(const MinEnergyProblem &p, const MinEnergySolution &sol)
{
    Eigen::MatrixXd x = fixed_junction_values(p);
    const int s = p.s;
    for (int j = 1; j < p.pieceCount(); ++j)
        x.middleRows(j * s + 1, s - 1) = sol.dtilde.middleRows((j - 1) * (s - 1), s - 1);
    return x;
}

void check_constraints(const MinEnergyProblem &p, const Trajectory &traj, double tol)
{
    const int s = p.s, m = p.pieceCount();
    for (int k = 0; k < s; ++k) {
        CHECK((traj.evalPiece(0, 0.0, k) - p.spec.d0.row(k).transpose()).cwiseAbs().maxCoeff() <=
              tol);
        CHECK((traj.evalPiece(m - 1, p.times[m - 1], k) - p.spec.dM.row(k).transpose())
                  .cwiseAbs()
                  .maxCoeff() <= tol);
    }
    for (int i = 0; i + 1 < m; ++i) {
        const Eigen::VectorXd q = p.spec.waypoints.row(i).transpose();
        CHECK((traj.evalPiece(i, p.times[i], 0) - q).cwiseAbs().maxCoeff() <= tol);
        CHECK((traj.evalPiece(i + 1, 0.0, 0) - q).cwiseAbs().maxCoeff() <= tol);
        for (int k = 1; k < s; ++k) {
            const Eigen::VectorXd left = traj.evalPiece(i, p.times[i], k);
            const Eigen::VectorXd right = traj.evalPiece(i + 1, 0.0, k);
            CHECK((left - right).cwiseAbs().maxCoeff() <= tol * std::max(1.0, left.norm()));
        }
    }
}

} // namespace

TEST_CASE("single-piece rest-to-rest cubic")
{
    const MinEnergySolution sol = solve_min_energy(rest_to_rest_1d());
    CHECK(sol.trajectory.piece(0).col(0).isApprox(Eigen::Vector4d(0, 0, 3, -2)));
    CHECK(sol.energy == doctest::Approx(12.0));
    CHECK(sol.dtilde.rows() == 0);
    CHECK_THROWS_AS(assemble(rest_to_rest_1d()), InvalidArgument);
}

TEST_CASE("two pieces with s = 2 give a 1x1 system")
{
    MinEnergyProblem p = rest_to_rest_1d();
    p.spec.waypoints = Eigen::MatrixXd::Constant(1, 1, 0.3);
    Eigen::VectorXd t(2);
    t << 0.7, 1.6;
    p.times = PieceTimes(t);
    const AssembledSystem sys = assemble(p);
    CHECK(sys.matrix.size() == 1);
    const MappingMatrices &c = cached_constants(2);
    const Eigen::MatrixXd h1 = h_matrix(c, 0.7), h2 = h_matrix(c, 1.6);
    CHECK(sys.matrix(0, 0) == doctest::Approx(h1(3, 3) + h2(1, 1)));
}

TEST_CASE("assembly matches dense B^T P^T H P B materialization")
{
    std::mt19937_64 rng(53);
    for (int s = 2; s <= 5; ++s)
        for (int m = 2; m <= 6; ++m) {
            const MinEnergyProblem p = oracle::random_problem(rng, s, m);
            const AssembledSystem sys = assemble(p);
            Eigen::MatrixXd dm, db;
            oracle::dense_system(p, dm, db);
            const Eigen::MatrixXd got = sys.matrix.toDense();
            CHECK(got.rows() == (m - 1) * (s - 1));
            const double tol = s < 5 ? 1e-12 : 1e-10;
            CHECK((got - dm).cwiseAbs().maxCoeff() <= tol * dm.cwiseAbs().maxCoeff());
            CHECK((sys.rhs - db).cwiseAbs().maxCoeff() <= tol * db.cwiseAbs().maxCoeff());
        }
}

TEST_CASE("coefficients match the dense KKT oracle")
{
    std::mt19937_64 rng(59);
    for (int s : {3, 4})
        for (int m = 1; m <= 8; ++m)
            for (int trial = 0; trial < 3; ++trial) {
                const MinEnergyProblem p = oracle::random_problem(rng, s, m);
                const MinEnergySolution sol = solve_min_energy(p);
                const Eigen::MatrixXd ref = oracle::kkt_coefficients(p);
                const Eigen::MatrixXd &got = sol.trajectory.coefficients();
                CHECK((got - ref).norm() <= 1e-8 * ref.norm());
                const double refEnergy =
                    total_cost(Trajectory(s, p.times, ref));
                CHECK(sol.energy <= refEnergy * (1 + 1e-10) + 1e-10);
            }
}

TEST_CASE("mirror-symmetric problems give mirrored right-hand sides")
{
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(-1, 1), ut(0.5, 2.0);
    for (int s : {3, 4}) {
        const int m = 5;
        MinEnergyProblem p;
        p.s = s;
        p.spec.d0 = Eigen::MatrixXd::NullaryExpr(s, 2, [&] { return u(rng); });
        p.spec.dM = p.spec.d0;
        for (int k = 1; k < s; k += 2)
            p.spec.dM.row(k) *= -1.0;
        p.spec.waypoints.resize(m - 1, 2);
        Eigen::VectorXd t(m);
        for (int i = 0; i < m; ++i)
            t[i] = (i < (m + 1) / 2) ? ut(rng) : t[m - 1 - i];
        for (int i = 0; i < m - 1; ++i)
            p.spec.waypoints.row(i) =
                (i < (m - 1) / 2) ? Eigen::RowVector2d(u(rng), u(rng)) : Eigen::RowVector2d(p.spec.waypoints.row(m - 2 - i));
        p.times = PieceTimes(t);

        const AssembledSystem sys = assemble(p);
        const MinEnergySolution sol = solve_min_energy(p);
        const int b = s - 1;
        for (int j = 0; j < m - 1; ++j) {
            const int mirror = m - 2 - j;
            for (int k = 0; k < b; ++k) {
                const double sign = ((k + 1) % 2 == 1) ? -1.0 : 1.0; // derivative order k+1
                const double scale = std::max(1.0, sys.rhs.cwiseAbs().maxCoeff());
                CHECK((sys.rhs.row(j * b + k) - sign * sys.rhs.row(mirror * b + k))
                          .cwiseAbs()
                          .maxCoeff() <= 1e-10 * scale);
                CHECK((sol.dtilde.row(j * b + k) - sign * sol.dtilde.row(mirror * b + k))
                          .cwiseAbs()
                          .maxCoeff() <= 1e-9);
            }
        }
    }
}

TEST_CASE("straight line through proportional waypoints has zero energy")
{
    for (int s : {2, 3, 4}) {
        const int m = 6;
        const Eigen::RowVector3d a(1.0, -2.0, 0.5), v(0.3, 0.1, -0.7);
        Eigen::VectorXd t(m);
        t << 0.5, 1.5, 0.8, 2.0, 1.1, 0.6;
        const PieceTimes times(t);
        MinEnergyProblem p;
        p.s = s;
        p.times = times;
        p.spec.d0 = Eigen::MatrixXd::Zero(s, 3);
        p.spec.dM = Eigen::MatrixXd::Zero(s, 3);
        p.spec.d0.row(0) = a;
        p.spec.d0.row(1) = v;
        p.spec.dM.row(0) = a + v * times.total();
        p.spec.dM.row(1) = v;
        p.spec.waypoints.resize(m - 1, 3);
        for (int i = 0; i < m - 1; ++i)
            p.spec.waypoints.row(i) = a + v * times.cumulative(i);
        const MinEnergySolution sol = solve_min_energy(p);
        CHECK(std::abs(sol.energy) < 1e-12);
        for (double tt : {0.0, 0.37, 2.2, times.total()})
            CHECK((eval(sol.trajectory, tt, 0).transpose() - (a + v * tt)).norm() < 1e-10);
    }
}

TEST_CASE("constraints and continuity on random instances")
{
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 200; ++trial) {
        const int s = 2 + trial % 4;
        const int m = 1 + trial % 12;
        const MinEnergyProblem p = oracle::random_problem(rng, s, m, 1 + trial % 3);
        const MinEnergySolution sol = solve_min_energy(p);
        check_constraints(p, sol.trajectory, 1e-8);
    }
}

TEST_CASE("durations spanning four decades stay accurate")
{
    std::mt19937_64 rng(71);
    for (int s : {3, 4})
        for (int trial = 0; trial < 10; ++trial) {
            MinEnergyProblem p = oracle::random_problem(rng, s, 10);
            Eigen::VectorXd t(10);
            std::uniform_real_distribution<double> e(-2.0, 2.0);
            for (int i = 0; i < 10; ++i)
                t[i] = std::pow(10.0, e(rng));
            p.times = PieceTimes(t);
            const MinEnergySolution sol = solve_min_energy(p);
            CHECK(sol.trajectory.coefficients().allFinite());
            for (int i = 0; i < 9; ++i)
                CHECK((sol.trajectory.evalPiece(i, t[i], 0) - p.spec.waypoints.row(i).transpose())
                          .norm() < 1e-4);
        }
}

TEST_CASE("solution is stationary in the free derivatives")
{
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 20; ++trial) {
        const int s = 3 + trial % 2;
        const int m = 2 + trial % 5;
        const MinEnergyProblem p = oracle::random_problem(rng, s, m);
        const MinEnergySolution sol = solve_min_energy(p);
        const Eigen::MatrixXd x = junctions(p, sol);
        const double j0 = sol.energy;
        const double eps = 1e-4;
        auto energyAt = [&](const Eigen::MatrixXd &xx) {
            return total_cost(trajectory_from_junctions(s, p.times, xx));
        };
        for (int jn = 1; jn < m; ++jn)
            for (int k = 1; k < s; ++k)
                for (int d = 0; d < p.dim(); ++d) {
                    Eigen::MatrixXd xp = x, xm = x;
                    xp(jn * s + k, d) += eps;
                    xm(jn * s + k, d) -= eps;
                    const double jp = energyAt(xp), jm = energyAt(xm);
                    CHECK(jp >= j0 - 1e-10);
                    CHECK(jm >= j0 - 1e-10);
                    CHECK(std::abs((jp - jm) / (2 * eps)) < 1e-6 * std::max(1.0, j0));
                }
    }
}

TEST_CASE("invalid problems are rejected")
{
    MinEnergyProblem p = rest_to_rest_1d();
    p.spec.waypoints = Eigen::MatrixXd::Zero(2, 1);
    CHECK_THROWS_AS(solve_min_energy(p), InvalidArgument);
    p = rest_to_rest_1d();
    p.s = 6;
    CHECK_THROWS_AS(solve_min_energy(p), InvalidArgument);
}

TEST_CASE("solve time grows linearly with piece count")
{
    std::mt19937_64 rng(79);
    auto timeSolve = [&](int m) {
        const MinEnergyProblem p = oracle::random_problem(rng, 4, m);
        double best = 1e300;
        for (int rep = 0; rep < 5; ++rep) {
            const auto t0 = std::chrono::steady_clock::now();
            const MinEnergySolution sol = solve_min_energy(p);
            const auto t1 = std::chrono::steady_clock::now();
            best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
        }
        return best;
    };
    const int m = 1 << 12;
    const double perPieceRatio = timeSolve(8 * m) / timeSolve(m) / 8.0;
    CHECK(perPieceRatio >= 0.5);
    CHECK(perPieceRatio <= 3.0);
}
