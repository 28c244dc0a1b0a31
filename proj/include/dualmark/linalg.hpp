#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dualmark::linalg {

/// Dense row-major matrix of doubles.
///
/// Dimensions are always positive and every entry is finite when the matrix
/// is built from caller-supplied data. Element access is unchecked.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double factor);
Matrix transpose(const Matrix& a);
Matrix multiply(const Matrix& a, const Matrix& b);

double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);

/// Thin SVD factors: a (m x n) == u (m x r) * diag(s) * v^T (n x r), r = min(m, n).
struct SvdFactors {
    Matrix u;
    std::vector<double> s;
    Matrix v;
};

/// One-sided (Hestenes) Jacobi SVD.
///
/// Singular values come out non-increasing; ties keep original column order.
/// Each u column is signed so its largest-magnitude entry is non-negative,
/// with the matching v column flipped alongside, so the factors are
/// reproducible for a given input.
SvdFactors svd(const Matrix& a);

/// Singular values only; same algorithm as svd().
std::vector<double> singular_values(const Matrix& a);

/// u * diag(s) * v^T.
Matrix reconstruct(const SvdFactors& f);

/// Largest |(Q^T Q - I)_ij| over the columns of q.
double orthogonality_defect(const Matrix& q);

}  // namespace dualmark::linalg
