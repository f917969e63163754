#include "bethe/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bethe/error.hpp"

namespace bethe {

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

std::vector<double> DenseMatrix::multiply(std::span<const double> v) const {
    if (v.size() != n_) throw ShapeMismatch("matrix-vector size mismatch");
    std::vector<double> out(n_, 0.0);
    for (std::size_t r = 0; r < n_; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < n_; ++c) acc += (*this)(r, c) * v[c];
        out[r] = acc;
    }
    return out;
}

double DenseMatrix::quadratic_form(std::span<const double> v) const { return dot(v, multiply(v)); }

double DenseMatrix::asymmetry() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = r + 1; c < n_; ++c) worst = std::max(worst, std::abs((*this)(r, c) - (*this)(c, r)));
    return worst;
}

double DenseMatrix::max_abs() const {
    double worst = 0.0;
    for (double v : data_) worst = std::max(worst, std::abs(v));
    return worst;
}

SymmetricEigen symmetric_eigen(const DenseMatrix& input) {
    const std::size_t n = input.size();
    for (double v : input.data())
        if (!std::isfinite(v)) throw InvalidArgument("matrix has non-finite entries");
    const double scale = std::max(1.0, input.max_abs());
    if (input.asymmetry() > 1e-12 * scale) throw InvalidArgument("matrix is not symmetric");

    DenseMatrix a = input;
    DenseMatrix v = DenseMatrix::identity(n);

    double total = 0.0;
    for (double x : a.data()) total += x * x;
    const double target = 1e-15 * std::sqrt(total);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += 2.0 * a(p, q) * a(p, q);
        return std::sqrt(s);
    };

    constexpr int kMaxSweeps = 100;
    int sweeps = 0;
    while (sweeps < kMaxSweeps && off_norm() > target) {
        ++sweeps;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // rotation zeroing a(p,q): Golub & Van Loan sym.schur2
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (off_norm() > 1e-10 * std::max(1.0, std::sqrt(total)))
        throw NumericalError("Jacobi eigensolver did not converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

    SymmetricEigen out;
    out.sweeps = sweeps;
    for (auto k : order) {
        out.values.push_back(a(k, k));
        std::vector<double> vec(n);
        for (std::size_t r = 0; r < n; ++r) vec[r] = v(r, k);
        // sign convention: largest-magnitude component positive
        const auto big = std::max_element(vec.begin(), vec.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
        if (big != vec.end() && *big < 0.0)
            for (auto& x : vec) x = -x;
        out.vectors.push_back(std::move(vec));
    }
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ShapeMismatch("dot product of unequal lengths");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ShapeMismatch("vectors of unequal lengths");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    return worst;
}

}  // namespace bethe
