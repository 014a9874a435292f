#pragma once

// Small dense k x k matrix with the few operations the Jacobian
// machinery needs. k is tiny (scans stop at k = 3), so plain
// row-major storage and LU with partial pivoting are plenty.

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace torusflow {

class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t k, double fill = 0.0) : k_(k), a_(k * k, fill) {}

    static Matrix identity(std::size_t k) {
        Matrix m(k);
        for (std::size_t i = 0; i < k; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t dim() const { return k_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * k_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * k_ + j]; }

    Matrix operator*(const Matrix& o) const {
        if (k_ != o.k_) throw std::invalid_argument("matrix dimension mismatch");
        Matrix r(k_);
        for (std::size_t i = 0; i < k_; ++i)
            for (std::size_t l = 0; l < k_; ++l) {
                double v = (*this)(i, l);
                if (v == 0.0) continue;
                for (std::size_t j = 0; j < k_; ++j) r(i, j) += v * o(l, j);
            }
        return r;
    }

    /// Determinant via LU elimination with partial pivoting.
    double det() const;

    /// Largest absolute entrywise difference.
    double max_abs_diff(const Matrix& o) const;

private:
    std::size_t k_ = 0;
    std::vector<double> a_;
};

}  // namespace torusflow
