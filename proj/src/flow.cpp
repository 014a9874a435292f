#include "torusflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace torusflow {

namespace {

// Same split-state recursion as the orbit iterator, so flow samples at
// integer times match orbit points bit for bit.
Vector iterate_psi(const SystemDefinition& sys, const Vector& eta, std::size_t n) {
    if (n == 0) return eta;
    auto [whole, frac] = split_integer_fractional(eta);
    for (std::size_t i = 0; i < n; ++i) {
        auto [carry, next] = split_integer_fractional(add(frac, sys.displacement(frac)));
        for (std::size_t p = 0; p < whole.size(); ++p) whole[p] += carry[p];
        frac = std::move(next);
    }
    return add_integer(frac, whole);
}

}  // namespace

FlowSample reconstruct_phi(const SystemDefinition& sys, const Vector& eta, double t) {
    if (!(t >= 0.0)) throw std::domain_error("reconstruct_phi: t must be >= 0");
    FlowSample sample;
    sample.t = t;
    sample.eta = eta;
    double nf = std::floor(t);
    sample.n = static_cast<std::size_t>(nf);
    sample.s = t - nf;
    Vector psin = iterate_psi(sys, eta, sample.n);
    sample.value = sys.eval_phi_unit(sample.s, psin);
    return sample;
}

std::vector<ContinuityJump> continuity_probe(const SystemDefinition& sys, const Vector& eta,
                                             std::size_t n_max, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("continuity_probe: delta must be in (0,1)");
    std::vector<ContinuityJump> jumps;
    jumps.reserve(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) {
        ContinuityJump cj;
        cj.n = n;
        double nd = static_cast<double>(n);
        cj.jump = norm_inf(sub(reconstruct_phi(sys, eta, nd + delta).value,
                               reconstruct_phi(sys, eta, nd - delta).value));
        double d10 = delta / 10.0;
        cj.jump_tenth = norm_inf(sub(reconstruct_phi(sys, eta, nd + d10).value,
                                     reconstruct_phi(sys, eta, nd - d10).value));
        jumps.push_back(cj);
    }
    return jumps;
}

ShiftIdentityReport check_shift_identity(const SystemDefinition& sys, const Vector& eta,
                                         const std::vector<double>& t_samples, double tol) {
    ShiftIdentityReport rep;
    IntegerVector ones(sys.k, 1);
    Vector psi_eta = sys.eval_psi(eta);
    Vector shifted_eta = add_integer(eta, ones);
    for (double t : t_samples) {
        if (t < 0.0) throw std::domain_error("check_shift_identity: t must be >= 0");
        double r_shift = norm_inf(sub(reconstruct_phi(sys, eta, t + 1.0).value,
                                      reconstruct_phi(sys, psi_eta, t).value));
        double r_equiv = norm_inf(sub(reconstruct_phi(sys, shifted_eta, t).value,
                                      add_integer(reconstruct_phi(sys, eta, t).value, ones)));
        rep.max_shift_residual = std::max(rep.max_shift_residual, r_shift);
        rep.max_equivariance = std::max(rep.max_equivariance, r_equiv);
    }
    rep.pass = rep.max_shift_residual <= tol && rep.max_equivariance <= tol;
    return rep;
}

RemainderReport remainder_b(const SystemDefinition& sys, const Vector& eta,
                            const std::vector<double>& t_grid) {
    RemainderReport rep;
    rep.samples.reserve(t_grid.size());
    for (double t : t_grid) {
        if (t < 0.0) throw std::domain_error("remainder_b: t must be >= 0");
        FlowSample fs = reconstruct_phi(sys, eta, t);
        Vector psin = iterate_psi(sys, eta, fs.n);
        Vector b = sub(fs.value, psin);
        double nb = norm_inf(b);
        rep.max_norm = std::max(rep.max_norm, nb);
        if (t >= 1.0) {
            std::size_t window = static_cast<std::size_t>(std::floor(std::log2(t)));
            if (rep.window_max.size() <= window) rep.window_max.resize(window + 1, 0.0);
            rep.window_max[window] = std::max(rep.window_max[window], nb);
        }
        rep.samples.emplace_back(t, std::move(b));
    }
    return rep;
}

Vector mean_motion_F(const SystemDefinition& sys, const Vector& eta, double t) {
    if (!(t > 1.0)) throw std::domain_error("mean_motion_F: t must be > 1");
    return scale(1.0 / t, sub(reconstruct_phi(sys, eta, t).value, eta));
}

std::tuple<double, double, double> embed_torus(double t, double x, double a, double b) {
    if (!(b > 0.0 && a > b)) throw std::invalid_argument("embed_torus: need 0 < b < a");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double ring = a + b * std::cos(two_pi * x);
    return {ring * std::cos(two_pi * t), ring * std::sin(two_pi * t), b * std::sin(two_pi * x)};
}

}  // namespace torusflow
