#include "torusflow/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace torusflow {

double Matrix::det() const {
    if (k_ == 0) throw std::invalid_argument("det of empty matrix");
    std::vector<double> lu = a_;
    const std::size_t k = k_;
    double d = 1.0;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        double best = std::abs(lu[col * k + col]);
        for (std::size_t r = col + 1; r < k; ++r) {
            double v = std::abs(lu[r * k + col]);
            if (v > best) { best = v; piv = r; }
        }
        if (best == 0.0) return 0.0;
        if (piv != col) {
            for (std::size_t j = 0; j < k; ++j) std::swap(lu[piv * k + j], lu[col * k + j]);
            d = -d;
        }
        d *= lu[col * k + col];
        for (std::size_t r = col + 1; r < k; ++r) {
            double f = lu[r * k + col] / lu[col * k + col];
            for (std::size_t j = col; j < k; ++j) lu[r * k + j] -= f * lu[col * k + j];
        }
    }
    return d;
}

double Matrix::max_abs_diff(const Matrix& o) const {
    if (k_ != o.k_) throw std::invalid_argument("matrix dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a_.size(); ++i) m = std::max(m, std::abs(a_[i] - o.a_[i]));
    return m;
}

}  // namespace torusflow
