#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "torusflow/jacobian.hpp"

using namespace torusflow;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

MapFn compose_psi(const SystemDefinition& sys, std::size_t n) {
    return [&sys, n](const Vector& eta) {
        Vector v = eta;
        for (std::size_t i = 0; i < n; ++i) v = sys.eval_psi(v);
        return v;
    };
}

}  // namespace

TEST_CASE("jacobian_fd recovers an affine map exactly") {
    MapFn affine = [](const Vector& x) {
        return Vector{2.0 * x[0] - 0.5 * x[1] + 3.0, 0.25 * x[0] + 1.5 * x[1] - 1.0};
    };
    Matrix j = jacobian_fd(affine, {0.3, -0.7}, 1e-5);
    CHECK(std::abs(j(0, 0) - 2.0) <= 1e-10);
    CHECK(std::abs(j(0, 1) + 0.5) <= 1e-10);
    CHECK(std::abs(j(1, 0) - 0.25) <= 1e-10);
    CHECK(std::abs(j(1, 1) - 1.5) <= 1e-10);

    MapFn ident = [](const Vector& x) { return x; };
    Matrix ji = jacobian_fd(ident, {1.0, 2.0, 3.0}, 1e-5);
    CHECK(ji.max_abs_diff(Matrix::identity(3)) <= 1e-10);
}

TEST_CASE("jacobian_fd matches the sine system's analytic matrix") {
    double r = 0.1;
    auto sys = make_sine_system(r);
    Matrix fd = jacobian_fd(sys.psi, {0.0, 0.0}, 1e-5);
    Matrix expected(2);
    expected(0, 0) = 1.0;
    expected(0, 1) = kTwoPi * r;
    expected(1, 0) = -kTwoPi * r;
    expected(1, 1) = 1.0;
    CHECK(fd.max_abs_diff(expected) <= 1e-8);

    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        Vector eta{unit(rng), unit(rng)};
        CHECK(jacobian_fd(sys.psi, eta, 1e-5).max_abs_diff((*sys.analytic_jacobian)(eta)) <= 1e-7);
    }
}

TEST_CASE("chain_jacobian") {
    auto constant = make_constant_system({0.7, 0.1});
    CHECK(chain_jacobian(constant, {0.2, 0.9}, 4, 1e-5).max_abs_diff(Matrix::identity(2)) == 0.0);

    auto sine = make_sine_system(0.1);
    CHECK(chain_jacobian(sine, {0.3, 0.6}, 1, 1e-5)
              .max_abs_diff((*sine.analytic_jacobian)({0.3, 0.6})) == 0.0);

    // chain product vs direct finite differences of the composition
    Matrix product = chain_jacobian(sine, {0.25, 0.1}, 3, 1e-5);
    Matrix direct = jacobian_fd(compose_psi(sine, 3), {0.25, 0.1}, 1e-5);
    CHECK(product.max_abs_diff(direct) <= 1e-6);
}

TEST_CASE("chain rule agreement for random points and depths") {
    auto sine = make_sine_system(0.2);
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> depth(1, 5);
    for (int trial = 0; trial < 20; ++trial) {
        Vector eta{unit(rng), unit(rng)};
        std::size_t n = depth(rng);
        CHECK(chain_jacobian(sine, eta, n, 1e-5)
                  .max_abs_diff(jacobian_fd(compose_psi(sine, n), eta, 1e-5)) <= 1e-5);
    }
}

TEST_CASE("det_scan finds nothing below 1/(2 pi) coupling") {
    auto rep = det_scan(make_sine_system(0.1), 128, 1e-3);
    CHECK(rep.candidates.empty());
    CHECK(rep.min_det >= 1.0 - std::pow(0.2 * std::numbers::pi, 2) - 1e-9);

    auto flat = det_scan(make_constant_system({0.5, 0.5}), 16, 1e-3);
    CHECK(flat.candidates.empty());
    CHECK(flat.min_det == 1.0);
}

TEST_CASE("det_scan locates the singular lattice at r = 1/(2 pi)") {
    auto sys = make_sine_system(1.0 / kTwoPi);
    auto rep = det_scan(sys, 128, 1e-3, 2);
    REQUIRE(!rep.candidates.empty());
    const std::vector<Vector> expected = {{0.0, 0.5}, {0.5, 0.0}, {0.5, 1.0}, {1.0, 0.5}};
    for (const auto& target : expected) {
        bool found = false;
        for (const auto& cand : rep.candidates) {
            if (cand.refined_root && norm_inf(sub(*cand.refined_root, target)) <= 2.0 / 128.0)
                found = true;
        }
        CHECK(found);
    }
    // refined roots really sit on the zero set
    for (const auto& cand : rep.candidates) {
        if (!cand.refined_root) continue;
        CHECK(std::abs((*sys.analytic_jacobian)(*cand.refined_root).det()) <= 1e-10);
        // a root of det J(psi) is inherited by every iterate
        for (std::size_t n = 1; n <= 3; ++n)
            CHECK(std::abs(chain_jacobian(sys, *cand.refined_root, n, 1e-5).det()) <= 1e-6);
    }
}

TEST_CASE("det_scan rejects oversized dimensions and coarse grids") {
    auto sys = make_sine_system(0.1);
    CHECK_THROWS_AS(det_scan(sys, 4, 1e-3), std::invalid_argument);
    auto sys4 = make_system_with_auto_interpolant(
        4, [](const Vector& x) { return x; }, "id4");
    CHECK_THROWS_AS(det_scan(sys4, 16, 1e-3), std::invalid_argument);
}

TEST_CASE("contraction injectivity criterion") {
    auto gentle = make_sine_system(0.1);
    auto rep = contraction_injectivity_check(gentle, 10000);
    CHECK(rep.criterion_satisfied);
    CHECK(rep.max_ratio < 0.64);  // Lipschitz constant 2 pi r
    CHECK(rep.psi_collisions == 0);

    auto constant = make_constant_system({0.3, 0.4});
    CHECK(contraction_injectivity_check(constant, 100).max_ratio <= 1e-12);

    auto steep = make_sine_system(0.5);
    auto rep2 = contraction_injectivity_check(steep, 10000);
    CHECK_FALSE(rep2.criterion_satisfied);
    CHECK(rep2.max_ratio > 1.0);
}

TEST_CASE("spot check of the steep-coupling ratio at the sine extremes") {
    auto steep = make_sine_system(0.5);
    Vector eta{0.0, 0.25}, p{0.0, 0.75};
    double ratio = norm_inf(sub(steep.displacement(eta), steep.displacement(p))) /
                   norm_inf(sub(eta, p));
    CHECK(ratio == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("boundary_extremal_check") {
    auto constant = make_constant_system({0.2, 0.8});
    auto rep = boundary_extremal_check(constant, {0.0, 0.0}, {1.0, 1.0}, 33, 1e-6);
    CHECK(rep.applicable);
    CHECK(rep.boundary_fraction == 1.0);

    auto gentle = make_sine_system(0.1);
    auto rep2 = boundary_extremal_check(gentle, {0.0, 0.0}, {1.0, 1.0}, 33, 1e-6);
    CHECK(rep2.applicable);
    CHECK(rep2.boundary_fraction == 1.0);

    // a box containing the singular point (0, 0.5) is inapplicable
    auto critical = make_sine_system(1.0 / kTwoPi);
    auto rep3 = boundary_extremal_check(critical, {-0.25, 0.25}, {0.25, 0.75}, 33, 1e-6);
    CHECK_FALSE(rep3.applicable);
}
