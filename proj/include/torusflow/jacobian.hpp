#pragma once

// Jacobians of the time-one map: finite differences, the ordered
// chain-rule product for iterates, determinant scans for singular
// points, and the contraction/extremal injectivity diagnostics.

#include <cstdint>
#include <optional>
#include <vector>

#include "torusflow/matrix.hpp"
#include "torusflow/system.hpp"
#include "torusflow/vecspace.hpp"

namespace torusflow {

struct SingularCandidate {
    Vector grid_point;
    double det_value = 0.0;
    std::optional<Vector> refined_root;
};

struct SingularScanReport {
    std::size_t grid_resolution = 0;
    double threshold = 0.0;
    std::vector<SingularCandidate> candidates;
    double min_det = 0.0;      // signed minimum over grid nodes
    double min_abs_det = 0.0;  // minimum of |det| over grid nodes
};

struct InjectivityReport {
    double max_ratio = 0.0;  // ||a(eta)-a(p)|| / ||eta-p||
    Vector worst_eta;
    Vector worst_p;
    bool criterion_satisfied = false;  // max_ratio < 1 on samples
    std::size_t psi_collisions = 0;    // sampled pairs with psi(eta) == psi(p)
    std::size_t n_pairs = 0;
};

struct BoundaryExtremalReport {
    bool applicable = false;  // false when det has a root inside the box
    double boundary_fraction = 0.0;
    std::size_t extremal_count = 0;
};

/// Central-difference Jacobian, column j = (f(x+h e_j) - f(x-h e_j))/2h.
Matrix jacobian_fd(const MapFn& map, const Vector& eta, double h);

/// Ordered product J(psi at psi_{n-1}(eta)) ... J(psi at eta), taking
/// the analytic Jacobian when the system carries one.
Matrix chain_jacobian(const SystemDefinition& sys, const Vector& eta, std::size_t n, double h);

/// Evaluates det J(psi) on the closed grid {i/g : 0 <= i <= g}^k,
/// flags nodes with |det| <= threshold or a sign change toward a
/// neighbor, and refines flagged spots along grid lines. An empty
/// candidate list certifies (at grid resolution) that no iterate
/// psi_n has a singular point.
SingularScanReport det_scan(const SystemDefinition& sys, std::size_t grid_per_axis,
                            double threshold, std::size_t threads = 1);

/// Samples random pairs in [0,2)^k and reports the worst ratio
/// ||a(eta)-a(p)|| / ||eta-p||; a max below 1 certifies injectivity on
/// the samples.
InjectivityReport contraction_injectivity_check(const SystemDefinition& sys, std::size_t n_pairs,
                                                std::uint64_t seed = 42);

/// Checks that the extremal points of {psi(eta) : eta on a closed-box
/// grid} have preimages within one grid cell of the box boundary,
/// provided det J(psi) has no root inside the box.
BoundaryExtremalReport boundary_extremal_check(const SystemDefinition& sys, const Vector& lo,
                                               const Vector& hi, std::size_t grid_per_axis,
                                               double det_threshold);

}  // namespace torusflow
