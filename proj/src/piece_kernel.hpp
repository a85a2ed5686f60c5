#pragma once

// Fixed-size per-piece kernels for the hot O(M) loops. Internal header.

#include "lstraj/ddp_map.hpp"

#include <Eigen/Dense>

#include <array>

namespace lstraj::detail {

template <int S>
struct PieceKernel {
    static constexpr int N = 2 * S;
    using Block = Eigen::Matrix<double, S, S>;
    using Lower = Eigen::Matrix<double, S, N>;
    using Square = Eigen::Matrix<double, N, N>;

    Block V, W, gram;
    std::array<double, S> invFactorial{};

    explicit PieceKernel(const MappingMatrices &c) : V(c.V), W(c.W)
    {
        for (int i = 0; i < S; ++i) {
            invFactorial[i] = c.U(i, i);
            for (int j = 0; j < S; ++j)
                gram(i, j) = falling(S + i) * falling(S + j) / (i + j + 1);
        }
    }

    // (S+i)! / i!, the s-th derivative factor of t^{S+i}
    static double falling(int k)
    {
        double r = 1.0;
        for (int m = 0; m < S; ++m)
            r *= k - m;
        return r;
    }

    // Lower S rows of A_b(t); the upper rows are diag(1/i!).
    void lowerBackward(double t, Lower &out) const
    {
        // inv[e] = t^{-e}, e in [1, 2S-1]
        std::array<double, 2 * S> inv{};
        const double r = 1.0 / t;
        inv[0] = 1.0;
        for (int e = 1; e < 2 * S; ++e)
            inv[e] = inv[e - 1] * r;
        for (int i = 0; i < S; ++i)
            for (int j = 0; j < S; ++j) {
                const double p = inv[S + i - j];
                out(i, j) = V(i, j) * p;
                out(i, S + j) = W(i, j) * p;
            }
    }

    // Nonzero block of Q(t): gram(i,j) * t^{i+j+1}
    void qBlock(double t, Block &out) const
    {
        std::array<double, 2 * S> pw{};
        pw[0] = 1.0;
        for (int e = 1; e < 2 * S; ++e)
            pw[e] = pw[e - 1] * t;
        for (int i = 0; i < S; ++i)
            for (int j = 0; j < S; ++j)
                out(i, j) = gram(i, j) * pw[i + j + 1];
    }

    void energyMatrix(double t, Square &h) const
    {
        Lower l;
        Block q;
        lowerBackward(t, l);
        qBlock(t, q);
        const Lower ql = q * l;
        h.noalias() = l.transpose() * ql;
    }
};

} // namespace lstraj::detail
