#include "torusflow/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace torusflow {

Orbit iterate_orbit(const SystemDefinition& sys, const Vector& eta, std::size_t n) {
    if (n < 1) throw std::invalid_argument("iterate_orbit: N must be >= 1");
    if (!is_finite(eta)) throw std::invalid_argument("iterate_orbit: non-finite eta");
    Orbit orbit;
    orbit.eta0 = eta;
    orbit.points.reserve(n + 1);
    orbit.displacements.reserve(n);
    orbit.points.push_back(eta);
    // The orbit state is kept split into an exact integer part and a
    // fractional part in [0,1); the displacement is evaluated at the
    // reduced point, which is legitimate because a(eta+q) = a(eta).
    // This keeps winding numbers exact and integer-shift equivariance
    // bit-stable over long orbits.
    auto [whole, frac] = split_integer_fractional(eta);
    Vector sum(eta.size(), 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        Vector a;
        try {
            a = sys.displacement(frac);
        } catch (const EvaluationError&) {
            throw EvaluationError("psi returned non-finite value at orbit index " +
                                      std::to_string(i),
                                  orbit.points.back());
        }
        auto [carry, next_frac] = split_integer_fractional(add(frac, a));
        for (std::size_t p = 0; p < whole.size(); ++p) whole[p] += carry[p];
        frac = std::move(next_frac);
        sum = add(sum, a);
        orbit.displacements.push_back(sum);
        orbit.points.push_back(add_integer(frac, whole));
    }
    return orbit;
}

RotationSequence rotation_sequence(const Orbit& orbit) {
    if (orbit.steps() < 1) throw std::invalid_argument("rotation_sequence: empty orbit");
    RotationSequence seq;
    seq.psi_over_n.reserve(orbit.steps());
    seq.a_over_n.reserve(orbit.steps());
    for (std::size_t i = 1; i <= orbit.steps(); ++i) {
        double inv = 1.0 / static_cast<double>(i);
        seq.psi_over_n.push_back(scale(inv, orbit.points[i]));
        seq.a_over_n.push_back(scale(inv, orbit.displacements[i - 1]));
    }
    return seq;
}

RotationSetEstimate limit_set_estimate(const std::vector<Vector>& seq, double tail_fraction,
                                       double epsilon) {
    if (tail_fraction <= 0.0 || tail_fraction > 1.0)
        throw std::invalid_argument("limit_set_estimate: tail_fraction must be in (0,1]");
    if (epsilon <= 0.0) throw std::invalid_argument("limit_set_estimate: epsilon must be positive");
    std::size_t n = seq.size();
    std::size_t tail_len =
        static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n)));
    if (tail_len < 10)
        throw std::invalid_argument(
            "limit_set_estimate: tail has fewer than 10 elements; run a longer orbit");
    std::size_t tail_start = n - tail_len;

    RotationSetEstimate est;
    est.tail_start = tail_start;
    est.epsilon = epsilon;

    std::vector<bool> assigned(tail_len, false);
    for (std::size_t i = 0; i < tail_len; ++i) {
        if (assigned[i]) continue;
        const Vector& seed = seq[tail_start + i];
        std::vector<std::size_t> members;
        for (std::size_t j = i; j < tail_len; ++j) {
            if (assigned[j]) continue;
            if (norm_inf(sub(seq[tail_start + j], seed)) <= epsilon) {
                assigned[j] = true;
                members.push_back(j);
            }
        }
        Cluster c;
        c.count = members.size();
        Vector mean(seed.size(), 0.0);
        for (std::size_t j : members) mean = add(mean, seq[tail_start + j]);
        c.center = scale(1.0 / static_cast<double>(members.size()), mean);
        for (std::size_t j : members)
            c.radius = std::max(c.radius, norm_inf(sub(seq[tail_start + j], c.center)));
        est.clusters.push_back(std::move(c));
    }
    std::stable_sort(est.clusters.begin(), est.clusters.end(),
                     [](const Cluster& a, const Cluster& b) { return a.count > b.count; });
    return est;
}

std::vector<PeriodicPointResult> detect_periodic(const SystemDefinition& sys,
                                                 const std::vector<Vector>& seeds,
                                                 std::size_t m_max, double tol) {
    if (m_max < 1) throw std::invalid_argument("detect_periodic: m_max must be >= 1");
    if (tol <= 0.0) throw std::invalid_argument("detect_periodic: tol must be positive");
    std::vector<PeriodicPointResult> hits;
    for (const auto& eta : seeds) {
        Vector current = eta;
        for (std::size_t m = 1; m <= m_max; ++m) {
            current = sys.eval_psi(current);
            Vector disp = sub(current, eta);
            IntegerVector q(disp.size());
            for (std::size_t p = 0; p < disp.size(); ++p)
                q[p] = static_cast<std::int64_t>(std::llround(disp[p]));
            double residual = norm_inf(sub(disp, to_vector(q)));
            if (residual > tol) continue;

            // Doubling confirmation guards against tolerance-induced
            // false positives: psi_{2m}(eta) must be eta + 2q.
            Vector twice = current;
            for (std::size_t i = 0; i < m; ++i) twice = sys.eval_psi(twice);
            IntegerVector q2(q.size());
            for (std::size_t p = 0; p < q.size(); ++p) q2[p] = 2 * q[p];
            bool confirmed = norm_inf(sub(sub(twice, eta), to_vector(q2))) <= 2.0 * tol;
            if (!confirmed) continue;

            PeriodicPointResult hit;
            hit.eta = eta;
            hit.m = m;
            hit.q = q;
            hit.rho.resize(q.size());
            for (std::size_t p = 0; p < q.size(); ++p)
                hit.rho[p] = static_cast<double>(q[p]) / static_cast<double>(m);
            hit.residual = residual;
            hit.doubling_confirmed = true;
            hits.push_back(std::move(hit));
            break;  // minimal m per seed
        }
    }
    return hits;
}

double cluster_set_distance(const std::vector<Cluster>& a, const std::vector<Cluster>& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("cluster_set_distance: empty cluster set");
    auto one_sided = [](const std::vector<Cluster>& from, const std::vector<Cluster>& to) {
        double worst = 0.0;
        for (const auto& ca : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& cb : to) best = std::min(best, norm_inf(sub(ca.center, cb.center)));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

QPeriodicityReport check_Q_periodicity(const SystemDefinition& sys, const Vector& eta,
                                       const IntegerVector& q, std::size_t n, double epsilon) {
    Orbit base = iterate_orbit(sys, eta, n);
    Orbit shifted = iterate_orbit(sys, add_integer(eta, q), n);
    QPeriodicityReport rep;
    rep.base = limit_set_estimate(rotation_sequence(base).a_over_n, 0.5, epsilon);
    rep.shifted = limit_set_estimate(rotation_sequence(shifted).a_over_n, 0.5, epsilon);
    rep.hausdorff_distance = cluster_set_distance(rep.base.clusters, rep.shifted.clusters);
    rep.pass = rep.hausdorff_distance <= 2.0 * epsilon;
    return rep;
}

}  // namespace torusflow
