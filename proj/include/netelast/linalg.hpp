#pragma once

// Small dense linear algebra for quotient graphs of modest size: row-major
// matrices, Cholesky solves of the reduced Laplacian, and cyclic Jacobi
// eigendecomposition of symmetric matrices.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace netelast {

using Vector = std::vector<double>;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> row_major);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> diag);
    static Matrix from_row_major(std::size_t rows, std::size_t cols, std::span<const double> values);

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] bool square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] const std::vector<double>& row_major() const { return data_; }
    [[nodiscard]] Vector column(std::size_t j) const;

    [[nodiscard]] Matrix transposed() const;
    [[nodiscard]] double trace() const;
    [[nodiscard]] double frobenius_norm() const;
    [[nodiscard]] double max_abs() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s);

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
Vector add(std::span<const double> a, std::span<const double> b);
Vector sub(std::span<const double> a, std::span<const double> b);
Vector scaled(std::span<const double> a, double s);

// x x^T
Matrix outer(std::span<const double> x);
// a += w * x x^T
void add_outer(Matrix& a, std::span<const double> x, double w);

// Determinant by LU with partial pivoting.
double determinant(const Matrix& a);
// Inverse by Gauss-Jordan with partial pivoting; throws SingularSystemError.
Matrix inverse(const Matrix& a);

// Largest |a_ij - a_ji|.
double asymmetry(const Matrix& a);

// Cholesky factor L (lower) of a symmetric positive-definite matrix, reused
// across right-hand sides.
class Cholesky {
public:
    explicit Cholesky(const Matrix& a);
    [[nodiscard]] Vector solve(std::span<const double> b) const;
    [[nodiscard]] std::size_t size() const { return l_.rows(); }

private:
    Matrix l_;
};

struct SymmetricEigen {
    Vector values;   // descending
    Matrix vectors;  // column k pairs with values[k]
};

// Cyclic Jacobi. Stops once the off-diagonal Frobenius mass is below
// 1e-13 * ||A||_F (or is exactly zero).
SymmetricEigen jacobi_eigen(const Matrix& a);

// f applied to the eigenvalues of a symmetric matrix.
Matrix symmetric_function(const SymmetricEigen& eig, double (*f)(double));
Matrix symmetric_inverse_sqrt(const Matrix& a);

}  // namespace netelast
