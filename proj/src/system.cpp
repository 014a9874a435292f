#include "torusflow/system.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace torusflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Walks a uniform lattice over [0,1)^k, calling fn on each point.
template <typename Fn>
void for_each_grid_point(std::size_t k, std::size_t per_axis, Fn&& fn) {
    std::vector<std::size_t> idx(k, 0);
    Vector eta(k, 0.0);
    while (true) {
        for (std::size_t p = 0; p < k; ++p)
            eta[p] = static_cast<double>(idx[p]) / static_cast<double>(per_axis);
        fn(eta);
        std::size_t p = 0;
        for (; p < k; ++p) {
            if (++idx[p] < per_axis) break;
            idx[p] = 0;
        }
        if (p == k) break;
    }
}

}  // namespace

Vector SystemDefinition::eval_psi(const Vector& eta) const {
    Vector out = psi(eta);
    if (!is_finite(out)) throw EvaluationError("psi returned non-finite value", eta);
    return out;
}

Vector SystemDefinition::eval_phi_unit(double t, const Vector& eta) const {
    Vector out = phi_unit(t, eta);
    if (!is_finite(out)) throw EvaluationError("Phi returned non-finite value", eta);
    return out;
}

Vector SystemDefinition::displacement(const Vector& eta) const {
    return sub(eval_psi(eta), eta);
}

ValidationReport validate_periodicity(const SystemDefinition& sys, std::size_t n_samples,
                                      std::size_t q_trials, double tol, std::uint64_t seed) {
    if (tol <= 0.0) throw std::invalid_argument("validate_periodicity: tol must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> qdist(-2, 2);

    ValidationReport rep;
    rep.tol = tol;
    for (std::size_t i = 0; i < n_samples; ++i) {
        Vector eta(sys.k);
        for (auto& e : eta) e = unit(rng);
        double t = unit(rng);
        for (std::size_t j = 0; j < q_trials; ++j) {
            IntegerVector q(sys.k);
            for (auto& e : q) e = qdist(rng);
            Vector shifted = add_integer(eta, q);
            Vector qv = to_vector(q);
            double v_psi = norm_inf(sub(sub(sys.eval_psi(shifted), sys.eval_psi(eta)), qv));
            double v_phi =
                norm_inf(sub(sub(sys.eval_phi_unit(t, shifted), sys.eval_phi_unit(t, eta)), qv));
            double v = std::max(v_psi, v_phi);
            if (v > rep.max_violation || rep.worst_sample.empty()) {
                rep.max_violation = std::max(rep.max_violation, v);
                rep.worst_sample = eta;
            }
        }
    }
    rep.pass = rep.max_violation <= tol;
    return rep;
}

ValidationReport validate_phi_boundary(const SystemDefinition& sys, std::size_t n_samples,
                                       double tol, std::uint64_t seed) {
    if (tol <= 0.0) throw std::invalid_argument("validate_phi_boundary: tol must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    ValidationReport rep;
    rep.tol = tol;
    for (std::size_t i = 0; i < n_samples; ++i) {
        Vector eta(sys.k);
        for (auto& e : eta) e = unit(rng);
        double r0 = norm_inf(sub(sys.eval_phi_unit(0.0, eta), eta));
        double r1 = norm_inf(sub(sys.eval_phi_unit(1.0, eta), sys.eval_psi(eta)));
        double v = std::max(r0, r1);
        if (v > rep.max_violation || rep.worst_sample.empty()) {
            rep.max_violation = std::max(rep.max_violation, v);
            rep.worst_sample = eta;
        }
    }
    rep.pass = rep.max_violation <= tol;
    return rep;
}

SystemDefinition make_constant_system(const Vector& g) {
    if (!is_finite(g)) throw std::invalid_argument("make_constant_system: non-finite G");
    SystemDefinition sys;
    sys.k = g.size();
    sys.label = "constant";
    sys.psi = [g](const Vector& eta) { return add(eta, g); };
    sys.phi_unit = [g](double t, const Vector& eta) { return add(eta, scale(t, g)); };
    std::size_t k = g.size();
    sys.analytic_jacobian = [k](const Vector&) { return Matrix::identity(k); };
    return sys;
}

SystemDefinition make_sine_system(double r) {
    if (!std::isfinite(r)) throw std::invalid_argument("make_sine_system: non-finite r");
    SystemDefinition sys;
    sys.k = 2;
    sys.label = "sine";
    sys.psi = [r](const Vector& eta) {
        return Vector{eta[0] + r * std::sin(kTwoPi * eta[1]),
                      eta[1] - r * std::sin(kTwoPi * eta[0])};
    };
    sys.phi_unit = [r](double t, const Vector& eta) {
        double ramp = std::sin(std::numbers::pi * t / 2.0);
        return Vector{eta[0] + r * ramp * std::sin(kTwoPi * eta[1]),
                      eta[1] - r * ramp * std::sin(kTwoPi * eta[0])};
    };
    sys.analytic_jacobian = [r](const Vector& eta) {
        Matrix j(2);
        j(0, 0) = 1.0;
        j(0, 1) = kTwoPi * r * std::cos(kTwoPi * eta[1]);
        j(1, 0) = -kTwoPi * r * std::cos(kTwoPi * eta[0]);
        j(1, 1) = 1.0;
        return j;
    };
    return sys;
}

SystemDefinition make_system_with_auto_interpolant(std::size_t k, MapFn psi, std::string label) {
    SystemDefinition sys;
    sys.k = k;
    sys.label = std::move(label);
    sys.psi = psi;
    sys.phi_unit = [psi](double t, const Vector& eta) {
        Vector image = psi(eta);
        Vector out(eta.size());
        for (std::size_t i = 0; i < eta.size(); ++i)
            out[i] = eta[i] + t * (image[i] - eta[i]);
        return out;
    };
    sys.auto_interpolant = true;
    return sys;
}

DisplacementBound estimate_sup_a(const SystemDefinition& sys, std::size_t grid_per_axis) {
    if (grid_per_axis < 2) throw std::invalid_argument("estimate_sup_a: grid_per_axis must be >= 2");
    DisplacementBound bound;
    bound.grid_resolution = grid_per_axis;
    for_each_grid_point(sys.k, grid_per_axis, [&](const Vector& eta) {
        double v = norm_inf(sys.displacement(eta));
        if (v > bound.M || bound.argmax.empty()) {
            bound.M = std::max(bound.M, v);
            bound.argmax = eta;
        }
    });
    return bound;
}

}  // namespace torusflow
