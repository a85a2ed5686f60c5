#include "lstraj/errors.hpp"
#include "lstraj/io.hpp"
#include "lstraj/spline.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace lstraj;

namespace {

Trajectory cubic_3t2_minus_2t3()
{
    Eigen::MatrixXd c(4, 1);
    c << 0, 0, 3, -2;
    return Trajectory(2, PieceTimes(Eigen::VectorXd::Ones(1)), c);
}

} // namespace

TEST_CASE("basis values")
{
    CHECK(basis(1.0, 0, 4).isApprox(Eigen::Vector4d(1, 1, 1, 1)));
    CHECK(basis(2.0, 1, 4).isApprox(Eigen::Vector4d(0, 1, 4, 12)));
    CHECK(basis(0.0, 2, 4).isApprox(Eigen::Vector4d(0, 0, 2, 0)));
    CHECK(basis(3.0, 5, 4).isZero());
}

TEST_CASE("basis derivative matches central differences")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ut(0.1, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double t = ut(rng);
        const double h = 1e-6 * t;
        for (int k = 1; k <= 4; ++k) {
            const Eigen::VectorXd fd = (basis(t + h, k - 1, 8) - basis(t - h, k - 1, 8)) / (2 * h);
            const Eigen::VectorXd an = basis(t, k, 8);
            for (int j = 0; j < 8; ++j)
                CHECK(std::abs(fd[j] - an[j]) <= 1e-7 * std::max(1.0, std::abs(an[j])));
        }
    }
}

TEST_CASE("eval on a single cubic")
{
    const Trajectory traj = cubic_3t2_minus_2t3();
    CHECK(eval(traj, 0.5, 0)[0] == doctest::Approx(0.5));
    CHECK(eval(traj, 0.5, 1)[0] == doctest::Approx(1.5));
    CHECK(eval(traj, 1.0, 0)[0] == doctest::Approx(1.0));
    CHECK(eval(traj, 1.0, 2)[0] == doctest::Approx(-6.0));

    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 1);
    c(0, 0) = 1.0;
    const Trajectory constant(2, PieceTimes(Eigen::VectorXd::Ones(1)), c);
    for (double t : {0.0, 0.3, 1.0})
        CHECK(eval(constant, t, 1)[0] == 0.0);
}

TEST_CASE("eval rejects times outside the span")
{
    const Trajectory traj = cubic_3t2_minus_2t3();
    CHECK_THROWS_AS(eval(traj, -1e-9, 0), DomainError);
    CHECK_THROWS_AS(eval(traj, 1.0 + 1e-9, 0), DomainError);
    CHECK_THROWS_AS(eval(traj, 0.5, -1), InvalidArgument);
}

TEST_CASE("junctions evaluate with the right piece")
{
    // Two constant pieces with different values expose the convention.
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(8, 1);
    c(0, 0) = 1.0;
    c(4, 0) = 2.0;
    Eigen::VectorXd t(2);
    t << 1.0, 2.0;
    const Trajectory traj(2, PieceTimes(t), c);
    CHECK(eval(traj, 0.999, 0)[0] == 1.0);
    CHECK(eval(traj, 1.0, 0)[0] == 2.0);
    CHECK(eval(traj, 3.0, 0)[0] == 2.0);
    CHECK(traj.times().cumulative(1) == 3.0);
}

TEST_CASE("piece times reject nonpositive durations")
{
    Eigen::VectorXd t(3);
    t << 1.0, 0.0, 2.0;
    CHECK_THROWS_AS(PieceTimes{t}, InvalidArgument);
    t[1] = -1.0;
    CHECK_THROWS_AS(PieceTimes{t}, InvalidArgument);
}

TEST_CASE("trajectory shape is validated")
{
    CHECK_THROWS_AS(Trajectory(3, PieceTimes(Eigen::VectorXd::Ones(2)), Eigen::MatrixXd::Zero(6, 3)),
                    InvalidArgument);
    EndDerivativeSpec spec{Eigen::MatrixXd::Zero(3, 2), Eigen::MatrixXd::Zero(3, 2),
                           Eigen::MatrixXd::Zero(1, 2)};
    CHECK_NOTHROW(spec.validate(3, 2));
    CHECK_THROWS_AS(spec.validate(3, 3), InvalidArgument);
    CHECK_THROWS_AS(spec.validate(2, 2), InvalidArgument);
}

TEST_CASE("trajectory JSON round trip preserves evaluation")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0), ut(0.2, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int s = 2 + trial % 3;
        const int m = 1 + trial % 5;
        const int dim = 1 + trial % 3;
        Eigen::VectorXd t(m);
        for (int i = 0; i < m; ++i)
            t[i] = ut(rng);
        const Eigen::MatrixXd c =
            Eigen::MatrixXd::NullaryExpr(2 * s * m, dim, [&] { return u(rng); });
        const Trajectory traj(s, PieceTimes(t), c);
        const Trajectory back = trajectory_from_json(trajectory_to_json(traj));
        CHECK(back.order() == s);
        CHECK(back.dim() == dim);
        CHECK(back.coefficients() == traj.coefficients());
        CHECK(back.times().durations() == traj.times().durations());
    }
}

TEST_CASE("sample CSV has header and rows up to the final time")
{
    const Trajectory traj = cubic_3t2_minus_2t3();
    std::ostringstream os;
    write_samples_csv(os, traj, 4.0);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,pos_x,vel_x,acc_x");
    int count = 0;
    std::string last;
    while (std::getline(in, line)) {
        ++count;
        last = line;
    }
    CHECK(count == 5);
    CHECK(last.rfind("1,1,0,-6", 0) == 0);
}
