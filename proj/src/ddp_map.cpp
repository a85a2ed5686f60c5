#include "lstraj/ddp_map.hpp"

#include "lstraj/errors.hpp"

#include <array>
#include <cmath>
#include <cstdint>

namespace lstraj {

namespace {

std::int64_t factorial(int n)
{
    std::int64_t r = 1;
    for (int k = 2; k <= n; ++k)
        r *= k;
    return r;
}

std::int64_t binomial(int n, int k)
{
    if (k < 0 || k > n)
        return 0;
    std::int64_t r = 1;
    for (int m = 1; m <= k; ++m)
        r = r * (n - k + m) / m;
    return r;
}

void check_duration(double t)
{
    if (!(t > 0.0) || !std::isfinite(t))
        throw InvalidArgument("piece duration must be positive");
}

} // namespace

MappingMatrices structural_constants(int s)
{
    if (s < 2 || s > kMaxOrder)
        throw InvalidArgument("penalized order must lie in [2, 5]");

    MappingMatrices m;
    m.s = s;
    m.E = Eigen::MatrixXd::Zero(s, s);
    m.F = Eigen::MatrixXd::Zero(s, s);
    m.G = Eigen::MatrixXd::Zero(s, s);
    m.U = Eigen::MatrixXd::Zero(s, s);
    m.V = Eigen::MatrixXd::Zero(s, s);
    m.W = Eigen::MatrixXd::Zero(s, s);

    // Loops run over 1-based (I, J) so the sums read as printed; storage is 0-based.
    for (int I = 1; I <= s; ++I) {
        m.E(I - 1, I - 1) = static_cast<double>(factorial(I - 1));
        m.U(I - 1, I - 1) = 1.0 / static_cast<double>(factorial(I - 1));
        for (int J = 1; J <= s; ++J) {
            if (I <= J)
                m.F(I - 1, J - 1) = static_cast<double>(factorial(J - 1) / factorial(J - I));
            m.G(I - 1, J - 1) = static_cast<double>(factorial(s + J - 1) / factorial(s + J - I));

            std::int64_t vsum = 0;
            std::int64_t wsum = 0;
            const int top = s - std::max(I, J);
            for (int k = 0; k <= top; ++k) {
                const std::int64_t tail = binomial(2 * s - J - k - 1, s - 1);
                const std::int64_t sign = (k % 2 == 0) ? 1 : -1;
                vsum += sign * binomial(s, I + k) * tail;
                wsum += binomial(s - k - 1, I - 1) * tail;
            }
            const double denom = static_cast<double>(factorial(J - 1));
            const double vsign = (I % 2 == 0) ? 1.0 : -1.0;
            const double wsign = ((I + J) % 2 == 0) ? 1.0 : -1.0;
            m.V(I - 1, J - 1) = vsign * static_cast<double>(vsum) / denom;
            m.W(I - 1, J - 1) = wsign * static_cast<double>(wsum) / denom;
        }
    }
    return m;
}

const MappingMatrices &cached_constants(int s)
{
    if (s < 2 || s > kMaxOrder)
        throw InvalidArgument("penalized order must lie in [2, 5]");
    static const std::array<MappingMatrices, kMaxOrder - 1> table = [] {
        std::array<MappingMatrices, kMaxOrder - 1> t;
        for (int k = 2; k <= kMaxOrder; ++k)
            t[k - 2] = structural_constants(k);
        return t;
    }();
    return table[s - 2];
}

Eigen::MatrixXd forward_matrix(const MappingMatrices &c, double t)
{
    check_duration(t);
    const int s = c.s;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * s, 2 * s);
    a.topLeftCorner(s, s) = c.E;
    for (int i = 0; i < s; ++i) {
        for (int j = i; j < s; ++j)
            a(s + i, j) = c.F(i, j) * std::pow(t, j - i);
        for (int j = 0; j < s; ++j)
            a(s + i, s + j) = c.G(i, j) * std::pow(t, s - i + j);
    }
    return a;
}

Eigen::MatrixXd backward_matrix(const MappingMatrices &c, double t)
{
    check_duration(t);
    const int s = c.s;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * s, 2 * s);
    a.topLeftCorner(s, s) = c.U;
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s; ++j) {
            const double p = std::pow(t, j - i - s);
            a(s + i, j) = c.V(i, j) * p;
            a(s + i, s + j) = c.W(i, j) * p;
        }
    }
    return a;
}

Eigen::MatrixXd backward_matrix_dt(const MappingMatrices &c, double t)
{
    check_duration(t);
    const int s = c.s;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * s, 2 * s);
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s; ++j) {
            const int e = j - i - s;
            const double p = e * std::pow(t, e - 1);
            a(s + i, j) = c.V(i, j) * p;
            a(s + i, s + j) = c.W(i, j) * p;
        }
    }
    return a;
}

} // namespace lstraj
