#include "lstraj/banded_matrix.hpp"

#include "lstraj/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lstraj {

BandedMatrix::BandedMatrix(int n, int lower, int upper)
    : n_(n), lower_(lower), upper_(upper), width_(2 * lower + upper + 1)
{
    if (n < 1 || lower < 0 || upper < 0)
        throw InvalidArgument("banded matrix needs n >= 1 and nonnegative bandwidths");
    data_.assign(static_cast<std::size_t>(n_) * width_, 0.0);
}

double BandedMatrix::operator()(int r, int c) const
{
    if (state_ == State::Assembled && !inBand(r, c))
        return 0.0;
    if (c - r < -lower_ || c - r > upper_ + lower_)
        return 0.0;
    return data_[index(r, c)];
}

void BandedMatrix::setZero()
{
    std::fill(data_.begin(), data_.end(), 0.0);
    pivots_.clear();
    state_ = State::Assembled;
}

Eigen::MatrixXd BandedMatrix::multiply(const Eigen::Ref<const Eigen::MatrixXd> &x) const
{
    if (state_ != State::Assembled)
        throw InvalidArgument("multiply requires an unfactorized matrix");
    if (x.rows() != n_)
        throw InvalidArgument("dimension mismatch in banded multiply");
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n_, x.cols());
    for (int r = 0; r < n_; ++r) {
        const int lo = std::max(0, r - lower_);
        const int hi = std::min(n_ - 1, r + upper_);
        for (int c = lo; c <= hi; ++c)
            y.row(r) += data_[index(r, c)] * x.row(c);
    }
    return y;
}

void BandedMatrix::factorize()
{
    if (state_ != State::Assembled)
        throw InvalidArgument("matrix is already factorized");
    pivots_.assign(n_, 0);
    const int reach = upper_ + lower_;
    for (int k = 0; k < n_; ++k) {
        const int last = std::min(n_ - 1, k + lower_);
        int p = k;
        double best = std::abs(data_[index(k, k)]);
        for (int r = k + 1; r <= last; ++r) {
            const double v = std::abs(data_[index(r, k)]);
            if (v > best) {
                best = v;
                p = r;
            }
        }
        if (best == 0.0)
            throw SingularMatrixError(static_cast<std::size_t>(k),
                                      "singular banded matrix at pivot " + std::to_string(k));
        pivots_[k] = p;
        const int cend = std::min(n_ - 1, k + reach);
        if (p != k) {
            double *rk = &data_[index(k, k)];
            double *rp = &data_[index(p, k)];
            std::swap_ranges(rk, rk + (cend - k + 1), rp);
        }
        const double *pivotRow = &data_[index(k, k)];
        const double inv = 1.0 / pivotRow[0];
        for (int r = k + 1; r <= last; ++r) {
            double *row = &data_[index(r, k)];
            const double l = row[0] * inv;
            row[0] = l;
            if (l == 0.0)
                continue;
            for (int c = 1; c <= cend - k; ++c)
                row[c] -= l * pivotRow[c];
        }
    }
    state_ = State::Factorized;
}

Eigen::MatrixXd BandedMatrix::solve(const Eigen::Ref<const Eigen::MatrixXd> &rhs) const
{
    Eigen::MatrixXd x = rhs;
    solveInPlace(x);
    return x;
}

void BandedMatrix::solveInPlace(Eigen::Ref<Eigen::MatrixXd> b) const
{
    if (state_ != State::Factorized)
        throw InvalidArgument("solve requires a factorized matrix");
    if (b.rows() != n_)
        throw InvalidArgument("right-hand side has " + std::to_string(b.rows()) +
                              " rows, expected " + std::to_string(n_));
    const int reach = upper_ + lower_;
    for (Eigen::Index col = 0; col < b.cols(); ++col) {
        double *x = b.col(col).data();
        // Forward: apply row swaps and unit-lower multipliers in factorization order.
        for (int k = 0; k < n_; ++k) {
            const int p = pivots_[k];
            if (p != k)
                std::swap(x[k], x[p]);
            const double xk = x[k];
            if (xk == 0.0)
                continue;
            const int last = std::min(n_ - 1, k + lower_);
            for (int r = k + 1; r <= last; ++r)
                x[r] -= data_[index(r, k)] * xk;
        }
        // Backward through U, whose bandwidth grew to upper + lower.
        for (int k = n_ - 1; k >= 0; --k) {
            const double *row = &data_[index(k, k)];
            const int cend = std::min(n_ - 1, k + reach);
            double acc = x[k];
            for (int c = k + 1; c <= cend; ++c)
                acc -= row[c - k] * x[c];
            x[k] = acc / row[0];
        }
    }
}

Eigen::MatrixXd BandedMatrix::toDense() const
{
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_, n_);
    for (int r = 0; r < n_; ++r)
        for (int c = std::max(0, r - lower_); c <= std::min(n_ - 1, r + upper_ + lower_); ++c)
            d(r, c) = (*this)(r, c);
    return d;
}

} // namespace lstraj
