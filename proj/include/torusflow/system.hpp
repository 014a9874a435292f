#pragma once

// A generalized system: the time-one map psi together with its
// unit-interval interpolant Phi, plus sampling-based validation of the
// structural conditions (integer equivariance and interpolant boundary
// values) and the built-in example systems.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "torusflow/matrix.hpp"
#include "torusflow/vecspace.hpp"

namespace torusflow {

using MapFn = std::function<Vector(const Vector&)>;
using InterpolantFn = std::function<Vector(double, const Vector&)>;
using JacobianFn = std::function<Matrix(const Vector&)>;

/// Raised when a caller-supplied map returns non-finite values.
struct EvaluationError : std::runtime_error {
    EvaluationError(std::string what, Vector at)
        : std::runtime_error(std::move(what)), point(std::move(at)) {}
    Vector point;
};

/// Immutable after construction; caller-supplied functions must be
/// re-entrant since SystemDefinition values are shared across threads.
struct SystemDefinition {
    std::size_t k = 0;
    MapFn psi;
    InterpolantFn phi_unit;
    std::optional<JacobianFn> analytic_jacobian;
    std::string label;
    // Set when phi_unit is the fallback linear interpolant rather than
    // one supplied with the system.
    bool auto_interpolant = false;

    /// Evaluates psi and rejects non-finite output.
    Vector eval_psi(const Vector& eta) const;
    /// Evaluates Phi(t, eta), t in [0, 1], rejecting non-finite output.
    Vector eval_phi_unit(double t, const Vector& eta) const;
    /// Displacement a(eta) = psi(eta) - eta.
    Vector displacement(const Vector& eta) const;
};

struct ValidationReport {
    double max_violation = 0.0;
    Vector worst_sample;
    double tol = 0.0;
    bool pass = false;
};

struct DisplacementBound {
    double M = 0.0;
    std::size_t grid_resolution = 0;
    Vector argmax;
};

/// Samples eta in [0,1)^k, t in [0,1] and integer q with entries in
/// {-2,...,2}; reports the worst violation of psi(eta+q) = psi(eta)+q
/// and Phi(t,eta+q) = Phi(t,eta)+q.
ValidationReport validate_periodicity(const SystemDefinition& sys, std::size_t n_samples,
                                      std::size_t q_trials, double tol,
                                      std::uint64_t seed = 42);

/// Worst violation of Phi(0,eta) = eta and Phi(1,eta) = psi(eta) over
/// uniform samples of the fundamental domain.
ValidationReport validate_phi_boundary(const SystemDefinition& sys, std::size_t n_samples,
                                       double tol, std::uint64_t seed = 42);

/// psi(eta) = eta + G with the linear interpolant and identity Jacobian.
SystemDefinition make_constant_system(const Vector& g);

/// The k=2 sine-coupled map
///   psi(eta) = [eta1 + r sin(2 pi eta2), eta2 - r sin(2 pi eta1)]
/// with the sin(pi t / 2) ramp interpolant and analytic Jacobian.
SystemDefinition make_sine_system(double r);

/// Wraps a bare time-one map with the linear interpolant
/// Phi(t,eta) = eta + t (psi(eta) - eta); flagged as auto.
SystemDefinition make_system_with_auto_interpolant(std::size_t k, MapFn psi, std::string label);

/// M = max over a uniform fundamental-domain grid of ||psi(eta)-eta||;
/// by periodicity of the displacement the grid on [0,1)^k suffices.
DisplacementBound estimate_sup_a(const SystemDefinition& sys, std::size_t grid_per_axis);

}  // namespace torusflow
