#include "torusflow/jacobian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace torusflow {

namespace {

Matrix system_jacobian(const SystemDefinition& sys, const Vector& eta, double h) {
    if (sys.analytic_jacobian) return (*sys.analytic_jacobian)(eta);
    return jacobian_fd(sys.psi, eta, h);
}

double det_at(const SystemDefinition& sys, const Vector& eta, double h) {
    return system_jacobian(sys, eta, h).det();
}

// Bisection on a sign change of det along one axis.
std::optional<Vector> bisect_root(const SystemDefinition& sys, Vector eta, std::size_t axis,
                                  double lo, double hi, double h) {
    auto f = [&](double v) {
        eta[axis] = v;
        return det_at(sys, eta, h);
    };
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) { eta[axis] = lo; return eta; }
    if (fhi == 0.0) { eta[axis] = hi; return eta; }
    if ((flo > 0.0) == (fhi > 0.0)) return std::nullopt;
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) { eta[axis] = mid; return eta; }
        if ((fm > 0.0) == (flo > 0.0)) { lo = mid; flo = fm; }
        else hi = mid;
    }
    eta[axis] = 0.5 * (lo + hi);
    if (std::abs(f(eta[axis])) <= 1e-10) return eta;
    return std::nullopt;
}

// Golden-section minimisation of |det| along one axis; handles
// tangential roots where det touches zero without a sign change.
std::optional<Vector> minimize_abs_root(const SystemDefinition& sys, Vector eta, std::size_t axis,
                                        double lo, double hi, double h) {
    auto f = [&](double v) {
        eta[axis] = v;
        return std::abs(det_at(sys, eta, h));
    };
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < 200 && b - a > 1e-14; ++i) {
        if (fc < fd) { b = d; d = c; fd = fc; c = b - gr * (b - a); fc = f(c); }
        else { a = c; c = d; fc = fd; d = a + gr * (b - a); fd = f(d); }
    }
    double best = 0.5 * (a + b);
    if (std::abs(f(best)) <= 1e-10) { eta[axis] = best; return eta; }
    return std::nullopt;
}

std::optional<Vector> refine_candidate(const SystemDefinition& sys, const Vector& node,
                                       double cell, double det_value, double h) {
    if (std::abs(det_value) <= 1e-10) return node;
    for (std::size_t axis = 0; axis < node.size(); ++axis) {
        double lo = std::max(0.0, node[axis] - cell);
        double hi = std::min(1.0, node[axis] + cell);
        if (auto r = bisect_root(sys, node, axis, lo, hi, h)) return r;
        if (auto r = minimize_abs_root(sys, node, axis, lo, hi, h)) return r;
    }
    return std::nullopt;
}

}  // namespace

Matrix jacobian_fd(const MapFn& map, const Vector& eta, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("jacobian_fd: h must be positive");
    const std::size_t k = eta.size();
    Matrix j(k);
    Vector plus = eta, minus = eta;
    for (std::size_t col = 0; col < k; ++col) {
        plus[col] = eta[col] + h;
        minus[col] = eta[col] - h;
        Vector fp = map(plus);
        Vector fm = map(minus);
        if (!is_finite(fp) || !is_finite(fm))
            throw EvaluationError("jacobian_fd: non-finite map value", eta);
        for (std::size_t row = 0; row < k; ++row)
            j(row, col) = (fp[row] - fm[row]) / (2.0 * h);
        plus[col] = eta[col];
        minus[col] = eta[col];
    }
    return j;
}

Matrix chain_jacobian(const SystemDefinition& sys, const Vector& eta, std::size_t n, double h) {
    if (n < 1) throw std::invalid_argument("chain_jacobian: n must be >= 1");
    Matrix product = system_jacobian(sys, eta, h);
    Vector current = eta;
    for (std::size_t i = 1; i < n; ++i) {
        current = sys.eval_psi(current);
        product = system_jacobian(sys, current, h) * product;
    }
    return product;
}

SingularScanReport det_scan(const SystemDefinition& sys, std::size_t grid_per_axis,
                            double threshold, std::size_t threads) {
    if (grid_per_axis < 8) throw std::invalid_argument("det_scan: grid must be >= 8 per axis");
    if (sys.k > 3) throw std::invalid_argument("det_scan: exhaustive scan limited to k <= 3");
    const std::size_t k = sys.k;
    const std::size_t g = grid_per_axis;
    const std::size_t nodes_per_axis = g + 1;  // closed grid [0,1]
    const double h = 1e-5;

    std::size_t total = 1;
    for (std::size_t p = 0; p < k; ++p) total *= nodes_per_axis;

    auto node_point = [&](std::size_t flat) {
        Vector eta(k);
        for (std::size_t p = 0; p < k; ++p) {
            eta[p] = static_cast<double>(flat % nodes_per_axis) / static_cast<double>(g);
            flat /= nodes_per_axis;
        }
        return eta;
    };

    std::vector<double> dets(total);
    std::size_t nthreads = std::max<std::size_t>(1, threads);
    if (nthreads == 1) {
        for (std::size_t i = 0; i < total; ++i) dets[i] = det_at(sys, node_point(i), h);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (total + nthreads - 1) / nthreads;
        for (std::size_t w = 0; w < nthreads; ++w) {
            std::size_t begin = w * chunk, end = std::min(total, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back([&, begin, end] {
                for (std::size_t i = begin; i < end; ++i) dets[i] = det_at(sys, node_point(i), h);
            });
        }
        for (auto& th : pool) th.join();
    }

    SingularScanReport rep;
    rep.grid_resolution = g;
    rep.threshold = threshold;
    rep.min_det = dets[0];
    rep.min_abs_det = std::abs(dets[0]);
    for (double d : dets) {
        rep.min_det = std::min(rep.min_det, d);
        rep.min_abs_det = std::min(rep.min_abs_det, std::abs(d));
    }

    std::size_t stride[3] = {1, nodes_per_axis, nodes_per_axis * nodes_per_axis};
    const double cell = 1.0 / static_cast<double>(g);
    for (std::size_t i = 0; i < total; ++i) {
        double d = dets[i];
        bool flagged = std::abs(d) <= threshold;
        if (!flagged) {
            std::size_t rest = i;
            for (std::size_t p = 0; p < k && !flagged; ++p) {
                std::size_t coord = rest % nodes_per_axis;
                rest /= nodes_per_axis;
                if (coord + 1 < nodes_per_axis) {
                    double dn = dets[i + stride[p]];
                    if ((d > 0.0) != (dn > 0.0)) flagged = true;
                }
            }
        }
        if (!flagged) continue;
        SingularCandidate cand;
        cand.grid_point = node_point(i);
        cand.det_value = d;
        cand.refined_root = refine_candidate(sys, cand.grid_point, cell, d, h);
        rep.candidates.push_back(std::move(cand));
    }
    return rep;
}

InjectivityReport contraction_injectivity_check(const SystemDefinition& sys, std::size_t n_pairs,
                                                std::uint64_t seed) {
    if (n_pairs < 1) throw std::invalid_argument("contraction_injectivity_check: n_pairs >= 1");
    std::mt19937_64 rng(seed);
    // [0,2)^k covers a full period of the displacement in every
    // direction, so sampled behaviour represents the whole space.
    std::uniform_real_distribution<double> box(0.0, 2.0);

    InjectivityReport rep;
    rep.n_pairs = n_pairs;
    for (std::size_t i = 0; i < n_pairs; ++i) {
        Vector eta(sys.k), p(sys.k);
        do {
            for (auto& e : eta) e = box(rng);
            for (auto& e : p) e = box(rng);
        } while (eta == p);
        double gap = norm_inf(sub(eta, p));
        double ratio = norm_inf(sub(sys.displacement(eta), sys.displacement(p))) / gap;
        if (ratio > rep.max_ratio || rep.worst_eta.empty()) {
            rep.max_ratio = std::max(rep.max_ratio, ratio);
            rep.worst_eta = eta;
            rep.worst_p = p;
        }
        if (norm_inf(sub(sys.eval_psi(eta), sys.eval_psi(p))) == 0.0) ++rep.psi_collisions;
    }
    rep.criterion_satisfied = rep.max_ratio < 1.0;
    return rep;
}

BoundaryExtremalReport boundary_extremal_check(const SystemDefinition& sys, const Vector& lo,
                                               const Vector& hi, std::size_t grid_per_axis,
                                               double det_threshold) {
    if (grid_per_axis < 3)
        throw std::invalid_argument("boundary_extremal_check: grid must be >= 3 per axis");
    if (lo.size() != sys.k || hi.size() != sys.k)
        throw std::invalid_argument("boundary_extremal_check: box dimension mismatch");
    const std::size_t k = sys.k;
    const std::size_t g = grid_per_axis;
    const double fd_h = 1e-5;

    std::size_t total = 1;
    for (std::size_t p = 0; p < k; ++p) total *= g;

    auto node_indices = [&](std::size_t flat) {
        std::vector<std::size_t> idx(k);
        for (std::size_t p = 0; p < k; ++p) {
            idx[p] = flat % g;
            flat /= g;
        }
        return idx;
    };
    auto node_point = [&](const std::vector<std::size_t>& idx) {
        Vector eta(k);
        for (std::size_t p = 0; p < k; ++p)
            eta[p] = lo[p] + (hi[p] - lo[p]) * static_cast<double>(idx[p]) /
                                 static_cast<double>(g - 1);
        return eta;
    };

    BoundaryExtremalReport rep;
    std::vector<Vector> images(total);
    for (std::size_t i = 0; i < total; ++i) {
        Vector eta = node_point(node_indices(i));
        if (std::abs(det_at(sys, eta, fd_h)) <= det_threshold) {
            rep.applicable = false;  // det root inside S: Theorem hypotheses fail
            return rep;
        }
        images[i] = sys.eval_psi(eta);
    }
    rep.applicable = true;

    auto is_extremal = [&](std::size_t i, OrderRelation dominates) {
        for (std::size_t j = 0; j < total; ++j)
            if (compare(images[j], images[i]) == dominates) return false;
        return true;
    };
    auto near_boundary = [&](std::size_t i) {
        auto idx = node_indices(i);
        for (std::size_t p = 0; p < k; ++p)
            if (idx[p] <= 1 || idx[p] + 2 >= g) return true;
        return false;
    };

    std::size_t boundary_hits = 0;
    for (std::size_t i = 0; i < total; ++i) {
        bool extremal =
            is_extremal(i, OrderRelation::Greater) || is_extremal(i, OrderRelation::Less);
        if (!extremal) continue;
        ++rep.extremal_count;
        if (near_boundary(i)) ++boundary_hits;
    }
    rep.boundary_fraction = rep.extremal_count == 0
                                ? 0.0
                                : static_cast<double>(boundary_hits) /
                                      static_cast<double>(rep.extremal_count);
    return rep;
}

}  // namespace torusflow
