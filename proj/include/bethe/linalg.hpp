#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bethe {

/// Row-major dense square matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    static DenseMatrix identity(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

    std::span<const double> data() const noexcept { return data_; }

    std::vector<double> multiply(std::span<const double> v) const;
    double quadratic_form(std::span<const double> v) const;

    /// Largest |A(r,c) - A(c,r)|.
    double asymmetry() const;
    double max_abs() const;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

struct SymmetricEigen {
    /// ascending
    std::vector<double> values;
    /// vectors[k] is the unit eigenvector for values[k]
    std::vector<std::vector<double>> vectors;
    int sweeps = 0;
};

/// Full eigendecomposition by cyclic Jacobi rotations. Iterates until the
/// off-diagonal Frobenius norm drops below 1e-15 of the matrix norm.
/// Throws InvalidArgument on a non-symmetric or non-finite input.
SymmetricEigen symmetric_eigen(const DenseMatrix& a);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

}  // namespace bethe
