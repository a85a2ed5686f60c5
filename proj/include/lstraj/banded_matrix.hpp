#pragma once

#include <Eigen/Dense>

#include <vector>

namespace lstraj {

/// Square band matrix with in-place LU factorization under row partial pivoting.
///
/// Each row r stores columns [r - lower, r + upper + lower] contiguously; the
/// extra `lower` super-diagonals receive fill-in produced by row swaps.
class BandedMatrix {
public:
    enum class State { Assembled, Factorized };

    BandedMatrix() = default;
    BandedMatrix(int n, int lower, int upper);

    int size() const { return n_; }
    int lowerBandwidth() const { return lower_; }
    int upperBandwidth() const { return upper_; }
    State state() const { return state_; }

    /// True when (r, c) lies within the declared band.
    bool inBand(int r, int c) const { return c - r <= upper_ && r - c <= lower_; }

    /// Entry access before factorization. (r, c) must lie within the band.
    double &operator()(int r, int c) { return data_[index(r, c)]; }
    double operator()(int r, int c) const;

    void setZero();

    /// Product with an n x D block. Only valid before factorization.
    Eigen::MatrixXd multiply(const Eigen::Ref<const Eigen::MatrixXd> &x) const;

    /// Throws SingularMatrixError carrying the offending column on an exactly zero pivot.
    void factorize();

    /// Solves A X = rhs column by column against the stored factors.
    Eigen::MatrixXd solve(const Eigen::Ref<const Eigen::MatrixXd> &rhs) const;
    void solveInPlace(Eigen::Ref<Eigen::MatrixXd> rhs) const;

    Eigen::MatrixXd toDense() const;

private:
    std::size_t index(int r, int c) const
    {
        return static_cast<std::size_t>(r) * width_ + static_cast<std::size_t>(c - r + lower_);
    }

    int n_ = 0;
    int lower_ = 0;
    int upper_ = 0;
    int width_ = 0;
    State state_ = State::Assembled;
    std::vector<double> data_;
    std::vector<int> pivots_;
};

} // namespace lstraj
