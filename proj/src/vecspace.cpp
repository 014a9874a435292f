#include "torusflow/vecspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace torusflow {

namespace {

void require_same_dim(const Vector& x, const Vector& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("dimension mismatch: " + std::to_string(x.size()) +
                                    " vs " + std::to_string(y.size()));
}

}  // namespace

const char* to_string(OrderRelation r) {
    switch (r) {
        case OrderRelation::Greater: return "Greater";
        case OrderRelation::Less: return "Less";
        case OrderRelation::Equal: return "Equal";
        case OrderRelation::Incomparable: return "Incomparable";
    }
    return "?";
}

bool is_finite(const Vector& x) {
    if (x.empty()) return false;
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

double norm_inf(const Vector& x) {
    if (x.empty()) throw std::invalid_argument("norm_inf: empty vector");
    double m = 0.0;
    for (double v : x) {
        if (!std::isfinite(v)) throw std::invalid_argument("norm_inf: non-finite entry");
        m = std::max(m, std::abs(v));
    }
    return m;
}

Vector add(const Vector& x, const Vector& y) {
    require_same_dim(x, y);
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return r;
}

Vector sub(const Vector& x, const Vector& y) {
    require_same_dim(x, y);
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

Vector scale(double c, const Vector& x) {
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = c * x[i];
    return r;
}

Vector to_vector(const IntegerVector& q) {
    Vector r(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) r[i] = static_cast<double>(q[i]);
    return r;
}

Vector add_integer(const Vector& x, const IntegerVector& q) {
    if (x.size() != q.size()) throw std::invalid_argument("dimension mismatch");
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + static_cast<double>(q[i]);
    return r;
}

OrderRelation compare(const Vector& x, const Vector& y) {
    require_same_dim(x, y);
    bool any_pos = false, any_neg = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - y[i];
        if (d > 0.0) any_pos = true;
        else if (d < 0.0) any_neg = true;
    }
    if (any_pos && any_neg) return OrderRelation::Incomparable;
    if (any_pos) return OrderRelation::Greater;
    if (any_neg) return OrderRelation::Less;
    return OrderRelation::Equal;
}

std::pair<IntegerVector, Vector> split_integer_fractional(const Vector& x) {
    if (!is_finite(x)) throw std::invalid_argument("split_integer_fractional: non-finite input");
    IntegerVector u(x.size());
    Vector v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double f = std::floor(x[i]);
        double frac = x[i] - f;
        if (frac >= 1.0) {  // floating edge just below an integer
            f += 1.0;
            frac = 0.0;
        }
        u[i] = static_cast<std::int64_t>(f);
        v[i] = frac;
    }
    return {std::move(u), std::move(v)};
}

namespace {

std::vector<Vector> extremal_impl(const std::vector<Vector>& s, bool want_max) {
    if (s.empty()) throw std::invalid_argument("extremal elements of empty set");
    std::vector<Vector> uniq;
    for (const auto& x : s) {
        bool dup = false;
        for (const auto& y : uniq)
            if (x == y) { dup = true; break; }
        if (!dup) uniq.push_back(x);
    }
    const OrderRelation dominates = want_max ? OrderRelation::Greater : OrderRelation::Less;
    std::vector<Vector> out;
    for (const auto& x : uniq) {
        bool dominated = false;
        for (const auto& y : uniq) {
            if (compare(y, x) == dominates) { dominated = true; break; }
        }
        if (!dominated) out.push_back(x);
    }
    return out;
}

}  // namespace

std::vector<Vector> maximal_elements(const std::vector<Vector>& s) {
    return extremal_impl(s, true);
}

std::vector<Vector> minimal_elements(const std::vector<Vector>& s) {
    return extremal_impl(s, false);
}

std::pair<Vector, Vector> extremal_bounds(const std::vector<Vector>& s) {
    auto maxima = maximal_elements(s);
    auto minima = minimal_elements(s);
    const std::size_t k = s.front().size();
    Vector x(k, -std::numeric_limits<double>::infinity());
    Vector y(k, std::numeric_limits<double>::infinity());
    for (const auto& z : maxima)
        for (std::size_t p = 0; p < k; ++p) x[p] = std::max(x[p], z[p]);
    for (const auto& z : minima)
        for (std::size_t p = 0; p < k; ++p) y[p] = std::min(y[p], z[p]);
    return {std::move(x), std::move(y)};
}

}  // namespace torusflow
