#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace esn {

/// Dense row-major matrix of doubles. Sized for this project's needs
/// (reservoirs are capped at 200 units), not a general-purpose library.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// XᵀX of a T×n matrix; result is n×n symmetric.
Matrix gram(const Matrix& x);

/// Xᵀy.
std::vector<double> transpose_times(const Matrix& x, const std::vector<double>& y);

/// Xv.
std::vector<double> multiply(const Matrix& x, const std::vector<double>& v);

/// Cholesky factorization A = LLᵀ of a symmetric positive definite matrix.
/// Throws NumericError when a pivot falls below the rank tolerance.
class Cholesky {
public:
    explicit Cholesky(const Matrix& a);

    std::vector<double> solve(const std::vector<double>& b) const;
    Matrix inverse() const;

private:
    Matrix l_;
};

/// All eigenvalues of a real square matrix: Householder reduction to upper
/// Hessenberg form followed by Francis double-shift QR iteration.
/// Throws NumericError on non-square input or if the iteration cap is hit.
std::vector<std::complex<double>> eigenvalues(Matrix a);

/// Maximum eigenvalue modulus.
double spectral_radius(const Matrix& m);

}  // namespace esn
