#pragma once

// Orbits of the time-one map: psi_n(eta), displacement sums a_n(eta),
// rotation-vector sequences, limit-set estimation by greedy
// epsilon-ball clustering, and periodic-point detection with rational
// rotation vectors.

#include <vector>

#include "torusflow/system.hpp"
#include "torusflow/vecspace.hpp"

namespace torusflow {

struct Orbit {
    Vector eta0;
    // points[n] = psi_n(eta0), n = 0..N
    std::vector<Vector> points;
    // displacements[n-1] = a_n(eta0), n = 1..N
    std::vector<Vector> displacements;

    std::size_t steps() const { return displacements.size(); }
};

struct RotationSequence {
    // psi_over_n[n-1] = psi_n(eta)/n, a_over_n[n-1] = a_n(eta)/n.
    // The two differ by eta0/n and share the same limit set.
    std::vector<Vector> psi_over_n;
    std::vector<Vector> a_over_n;
};

struct Cluster {
    Vector center;
    std::size_t count = 0;
    double radius = 0.0;
};

struct RotationSetEstimate {
    std::vector<Cluster> clusters;  // sorted by descending count
    std::size_t tail_start = 0;     // index into the sequence
    double epsilon = 0.0;
};

struct PeriodicPointResult {
    Vector eta;
    std::size_t m = 0;  // minimal period found
    IntegerVector q;
    Vector rho;  // q / m
    double residual = 0.0;
    bool doubling_confirmed = false;  // psi_{2m}(eta) = eta + 2q check
};

struct QPeriodicityReport {
    RotationSetEstimate base;
    RotationSetEstimate shifted;
    double hausdorff_distance = 0.0;
    bool pass = false;
};

/// Iterates psi N times, recording psi_n(eta) and the running
/// displacement sums a_n(eta).
Orbit iterate_orbit(const SystemDefinition& sys, const Vector& eta, std::size_t n);

/// psi_n(eta)/n and a_n(eta)/n for n = 1..N.
RotationSequence rotation_sequence(const Orbit& orbit);

/// Greedy epsilon-ball clustering over the tail of a vector sequence:
/// the earliest unassigned point seeds a cluster, absorbs everything
/// within epsilon of it, and the center is re-set to the absorbed mean.
RotationSetEstimate limit_set_estimate(const std::vector<Vector>& seq, double tail_fraction,
                                       double epsilon);

/// Default clustering radius: psi_n/n converges like 1/n in the model
/// cases, so 10/N leaves headroom without merging distinct limits.
inline double default_epsilon(std::size_t n) { return 10.0 / static_cast<double>(n); }

/// Scans m = 1..m_max per seed for psi_m(eta) = eta + q with integer q
/// (q taken by rounding the displacement). Reports the minimal m and
/// confirms the doubling identity psi_{2m}(eta) = eta + 2q.
std::vector<PeriodicPointResult> detect_periodic(const SystemDefinition& sys,
                                                 const std::vector<Vector>& seeds,
                                                 std::size_t m_max, double tol);

/// Compares rotation-set estimates (from a_n/n) at eta and eta + q;
/// passes when the max-min distance between center sets is <= 2 epsilon.
QPeriodicityReport check_Q_periodicity(const SystemDefinition& sys, const Vector& eta,
                                       const IntegerVector& q, std::size_t n, double epsilon);

/// Symmetric max over one set of the min distance to the other.
double cluster_set_distance(const std::vector<Cluster>& a, const std::vector<Cluster>& b);

}  // namespace torusflow
