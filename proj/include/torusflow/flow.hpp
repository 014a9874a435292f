#pragma once

// Continuous-time reconstruction from (Phi, psi):
// phi(n + s, eta) = Phi(s, psi_n(eta)), plus the gluing/shift checks,
// the bounded-remainder decomposition, mean motion, and the 3-space
// torus embedding for plot data.

#include <tuple>
#include <vector>

#include "torusflow/iteration.hpp"
#include "torusflow/system.hpp"
#include "torusflow/vecspace.hpp"

namespace torusflow {

struct FlowSample {
    double t = 0.0;
    Vector eta;
    Vector value;      // phi(t, eta)
    std::size_t n = 0; // integer part of t
    double s = 0.0;    // fractional part, in [0, 1)
};

struct ContinuityJump {
    std::size_t n = 0;
    double jump = 0.0;        // ||phi(n+delta) - phi(n-delta)||
    double jump_tenth = 0.0;  // same at delta/10
};

struct ShiftIdentityReport {
    double max_shift_residual = 0.0;   // phi(t+1,eta) vs phi(t,psi(eta))
    double max_equivariance = 0.0;     // phi(t,eta+q) vs phi(t,eta)+q
    bool pass = false;
};

struct RemainderReport {
    std::vector<std::pair<double, Vector>> samples;  // (t, b(t,eta))
    double max_norm = 0.0;
    // max of ||b|| over each dyadic time window [2^j, 2^{j+1})
    std::vector<double> window_max;
};

/// phi(t, eta) with t = n + s, s in [0, 1). Rejects t < 0.
FlowSample reconstruct_phi(const SystemDefinition& sys, const Vector& eta, double t);

/// Jumps across the gluing points t = n, measured at delta and
/// delta/10; both shrink with delta when Phi satisfies its boundary
/// conditions.
std::vector<ContinuityJump> continuity_probe(const SystemDefinition& sys, const Vector& eta,
                                             std::size_t n_max, double delta);

/// Checks phi(t+1,eta) = phi(t,psi(eta)) and phi(t,eta+q) = phi(t,eta)+q
/// (q = all-ones) over the given times.
ShiftIdentityReport check_shift_identity(const SystemDefinition& sys, const Vector& eta,
                                         const std::vector<double>& t_samples, double tol);

/// b(t,eta) = phi(t,eta) - psi_{n_t}(eta) over a time grid, with
/// dyadic-window maxima exhibiting non-growth.
RemainderReport remainder_b(const SystemDefinition& sys, const Vector& eta,
                            const std::vector<double>& t_grid);

/// F(t,eta) = (phi(t,eta) - eta)/t, t > 1.
Vector mean_motion_F(const SystemDefinition& sys, const Vector& eta, double t);

/// Standard torus surface in 3-space, 0 < b < a:
/// u = (a + b cos 2 pi x) cos 2 pi t, v = ... sin 2 pi t, w = b sin 2 pi x.
std::tuple<double, double, double> embed_torus(double t, double x, double a, double b);

}  // namespace torusflow
