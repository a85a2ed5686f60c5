#include "lstraj/energy.hpp"
#include "lstraj/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace lstraj;

TEST_CASE("Q matrix closed form")
{
    const Eigen::MatrixXd q = q_matrix(2, 1.0);
    Eigen::Matrix2d block;
    block << 4, 6, 6, 12;
    CHECK(q.bottomRightCorner(2, 2).isApprox(block));
    CHECK(q.topRows(2).isZero());
    CHECK(q.leftCols(2).isZero());

    const double t = 1.7;
    const Eigen::MatrixXd qt = q_matrix(2, t);
    CHECK(qt(2, 2) == doctest::Approx(4 * t));
    CHECK(qt(2, 3) == doctest::Approx(6 * t * t));
    CHECK(qt(3, 3) == doctest::Approx(12 * t * t * t));
    CHECK_THROWS_AS(q_matrix(2, 0.0), InvalidArgument);

    for (int s = 2; s <= 5; ++s)
        for (double tt : {0.3, 1.0, 2.5}) {
            const Eigen::MatrixXd a = q_matrix(s, tt);
            const Eigen::MatrixXd b = oracle::quadrature_q(s, tt);
            CHECK((a - b).norm() <= 1e-10 * b.norm());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
            CHECK(es.eigenvalues().minCoeff() > -1e-9 * es.eigenvalues().maxCoeff());
            Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
            CHECK(lu.rank() == s);
        }
}

TEST_CASE("H matrix examples")
{
    const MappingMatrices c2 = structural_constants(2);
    const Eigen::Vector4d d(0, 0, 1, 0);
    CHECK(d.dot(h_matrix(c2, 1.0) * d) == doctest::Approx(12.0));

    // Straight line 0 -> 1 over t with velocity 1/t at both ends has no acceleration.
    for (int s = 2; s <= 4; ++s) {
        const MappingMatrices c = structural_constants(s);
        const double t = 2.3;
        Eigen::VectorXd line = Eigen::VectorXd::Zero(2 * s);
        line[1] = 1.0 / t;
        line[s] = 1.0;
        line[s + 1] = 1.0 / t;
        CHECK(std::abs(line.dot(h_matrix(c, t) * line)) < 1e-10);
    }
}

TEST_CASE("H matches the energy of the reconstructed piece")
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1, 1), ut(0.2, 3.0);
    for (int s = 2; s <= 5; ++s) {
        const MappingMatrices c = structural_constants(s);
        for (int trial = 0; trial < 10; ++trial) {
            const double t = ut(rng);
            const Eigen::VectorXd d = Eigen::VectorXd::NullaryExpr(2 * s, [&] { return u(rng); });
            const Eigen::MatrixXd h = h_matrix(c, t);
            CHECK((h - h.transpose()).norm() == 0.0);
            const double viaH = d.dot(h * d);
            CHECK(viaH >= -1e-12);
            const Trajectory piece(s, PieceTimes(Eigen::VectorXd::Constant(1, t)),
                                   backward_matrix(c, t) * d);
            CHECK(oracle::relative_error(viaH, total_cost(piece), 1e-12) < 1e-10);
        }
    }
}

TEST_CASE("total cost")
{
    Eigen::MatrixXd c(4, 1);
    c << 0, 0, 3, -2;
    const Trajectory cubic(2, PieceTimes(Eigen::VectorXd::Ones(1)), c);
    CHECK(total_cost(cubic) == doctest::Approx(12.0));

    Eigen::MatrixXd lin = Eigen::MatrixXd::Zero(12, 2);
    lin(0, 0) = 1;
    lin(1, 1) = 2;
    lin(6, 0) = 3;
    const Trajectory linear(3, PieceTimes(Eigen::VectorXd::Ones(2)), lin);
    CHECK(total_cost(linear) == 0.0);

    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(-1, 1), ut(0.2, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int s = 2 + trial % 4, m = 1 + trial % 4;
        Eigen::VectorXd t(m);
        for (int i = 0; i < m; ++i)
            t[i] = ut(rng);
        const Trajectory traj(s, PieceTimes(t),
                              Eigen::MatrixXd::NullaryExpr(2 * s * m, 3, [&] { return u(rng); }));
        CHECK(oracle::relative_error(total_cost(traj), oracle::quadrature_energy(traj), 1e-12) <
              1e-8);
    }
}

TEST_CASE("piece gradients")
{
    Eigen::MatrixXd c(4, 1);
    c << 0, 0, 3, -2;
    CHECK(grad_J_by_c(c, 2, 1.0).isApprox(Eigen::Vector4d(0, 0, 0, -12)));
    CHECK(grad_J_by_T(c, 2, 1.0) == doctest::Approx(36.0));

    Eigen::MatrixXd low = Eigen::MatrixXd::Zero(6, 2);
    low(0, 0) = 1;
    low(2, 1) = 5;
    CHECK(grad_J_by_c(low, 3, 1.4).isZero());
    CHECK(grad_J_by_T(low, 3, 1.4) == 0.0);

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1, 1), ut(0.5, 2.0);
    for (int s = 2; s <= 5; ++s) {
        const double t = ut(rng);
        const Eigen::MatrixXd coef = Eigen::MatrixXd::NullaryExpr(2 * s, 2, [&] { return u(rng); });
        auto energy = [&](const Eigen::MatrixXd &cc, double tt) {
            return (cc.transpose() * q_matrix(s, tt) * cc).trace();
        };
        const Eigen::MatrixXd g = grad_J_by_c(coef, s, t);
        const double h = 1e-6;
        for (int i = 0; i < 2 * s; ++i)
            for (int d = 0; d < 2; ++d) {
                Eigen::MatrixXd p = coef, m = coef;
                p(i, d) += h;
                m(i, d) -= h;
                const double fd = (energy(p, t) - energy(m, t)) / (2 * h);
                CHECK(oracle::relative_error(fd, g(i, d)) < 1e-6);
            }
        const double ht = 1e-6;
        const double fdT = (energy(coef, t + ht) - energy(coef, t - ht)) / (2 * ht);
        CHECK(oracle::relative_error(fdT, grad_J_by_T(coef, s, t)) < 1e-6);
    }
}

TEST_CASE("H partition blocks")
{
    const Eigen::MatrixXd h = h_matrix(structural_constants(3), 1.2);
    const HPartition part = partition(h);
    CHECK(part.phi == part.lambda.transpose());
    CHECK(part.gamma.rows() == 3);
}
