#include <cmath>
#include <numbers>

#include <doctest.h>

#include "hsm/kernels.hpp"
#include "hsm/quadrature.hpp"

using namespace hsm;

namespace {
constexpr double kPi = std::numbers::pi;

KernelPointPair make_pair(Vec x1, double y1, Vec x2, double y2) {
    return KernelPointPair(HalfSpacePoint(std::move(x1), y1),
                           HalfSpacePoint(std::move(x2), y2));
}

// heat kernel straight from its displayed form, with the two exponentials
// kept separate; safe only for moderate arguments
double heat_reference(int n, const KernelPointPair& pair, double t) {
    const double y = pair.first().y(), yp = pair.second().y();
    const double rsq = pair.transverse_distance() * pair.transverse_distance();
    const double angular = periodic_integrate(
        [&](double phi) { return std::exp(y * yp / (2.0 * t) * std::cos(phi)); });
    return std::pow(4.0 * kPi * t, -0.5 * (n + 1)) * std::sqrt(y * yp) *
           std::exp(-(rsq + y * y + yp * yp) / (4.0 * t)) * angular;
}
}  // namespace

TEST_CASE("pair bookkeeping") {
    auto pair = make_pair({0.0, 0.0}, 1.0, {1.0, 0.0}, 2.0);
    CHECK(pair.transverse_distance() == doctest::Approx(1.0));
    CHECK(pair.distance() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(pair.depth_ratio() == doctest::Approx(std::sqrt(2.0) / std::sqrt(2.0)).epsilon(1e-15));
    CHECK_FALSE(pair.diagonal());

    auto diag = make_pair({0.5, 0.5}, 1.0, {0.5, 0.5}, 1.0);
    CHECK(diag.diagonal());
    CHECK_THROWS_AS(diag.depth_ratio(), InvalidArgument);

    CHECK_THROWS_AS(KernelPointPair(HalfSpacePoint({0.0}, 1.0), HalfSpacePoint({0.0, 0.0}, 1.0)),
                    InvalidArgument);

    auto shifted = pair.translated(3.0);
    CHECK(shifted.first().y() == doctest::Approx(4.0));
    CHECK(shifted.distance() == doctest::Approx(pair.distance()).epsilon(1e-15));
}

TEST_CASE("heat kernel matches the displayed form and its symmetries") {
    const KernelParams params(3, 2.0);
    auto pair = make_pair({0.0, 0.0}, 1.0, {0.0, 0.0}, 1.0);
    CHECK(heat_kernel(params, pair, 1.0) ==
          doctest::Approx(heat_reference(3, pair, 1.0)).epsilon(1e-12));

    auto off = make_pair({0.4, -0.3}, 0.8, {-0.2, 0.1}, 1.7);
    for (double t : {0.05, 0.3, 2.0}) {
        CHECK(heat_kernel(params, off, t) ==
              doctest::Approx(heat_reference(3, off, t)).epsilon(1e-12));
        auto swapped = make_pair({-0.2, 0.1}, 1.7, {0.4, -0.3}, 0.8);
        CHECK(heat_kernel(params, off, t) == heat_kernel(params, swapped, t));
        CHECK(heat_kernel(params, off, t) > 0.0);
    }
    CHECK_THROWS_AS(heat_kernel(params, off, 0.0), InvalidArgument);
    CHECK_THROWS_AS(heat_kernel(params, off, -1.0), InvalidArgument);
}

TEST_CASE("heat kernel vanishes like the square root of the height") {
    const KernelParams params(3, 2.0);
    const double t = 0.5;
    double prev_ratio = 0.0;
    for (double yp : {1e-4, 1e-6, 1e-8}) {
        auto pair = make_pair({0.0, 0.0}, 1.0, {0.5, 0.0}, yp);
        const double ratio = heat_kernel(params, pair, t) / std::sqrt(yp);
        if (prev_ratio > 0.0) CHECK(ratio == doctest::Approx(prev_ratio).epsilon(1e-3));
        prev_ratio = ratio;
    }
}

TEST_CASE("phi kernel closed-form chain at the reference configuration") {
    const KernelParams params(3, 2.0);
    auto pair = make_pair({0.0, 0.0}, 1.0, {1.0, 0.0}, 1.0);
    // |p-q| = 1, depth ratio 1, so the value is prefactor * F(1) = 1/(2 pi sqrt 5)
    CHECK(phi_kernel(params, pair) ==
          doctest::Approx(1.0 / (2.0 * kPi * std::sqrt(5.0))).epsilon(1e-13));

    // angular-display route agrees
    CHECK(phi_kernel_angular(params, pair) ==
          doctest::Approx(phi_kernel(params, pair)).epsilon(1e-11));

    auto swapped = make_pair({1.0, 0.0}, 1.0, {0.0, 0.0}, 1.0);
    CHECK(phi_kernel(params, pair) == phi_kernel(params, swapped));

    auto diag = make_pair({0.0, 0.0}, 1.0, {0.0, 0.0}, 1.0);
    CHECK_THROWS_AS(phi_kernel(params, diag), InvalidArgument);
}

TEST_CASE("phi kernel is homogeneous of degree alpha - n") {
    for (auto [n, alpha] : {std::pair<int, double>{3, 2.0}, {3, 2.6}, {4, 3.0}}) {
        const KernelParams params(n, alpha);
        Vec x1(n - 1, 0.0), x2(n - 1, 0.0);
        x2[0] = 0.7;
        auto pair = make_pair(x1, 0.9, x2, 1.4);
        Vec sx1(n - 1, 0.0), sx2(n - 1, 0.0);
        sx2[0] = 1.4;
        auto scaled = make_pair(sx1, 1.8, sx2, 2.8);
        const double expect = std::pow(2.0, alpha - n) * phi_kernel(params, pair);
        CHECK(phi_kernel(params, scaled) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("psi kernel reference values") {
    const KernelParams params(3, 2.0);
    auto unit = make_pair({0.0, 0.0}, 1.0, {1.0, 0.0}, 1.0);
    CHECK(psi_kernel(params, unit) == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-14));
    auto two = make_pair({0.0, 0.0}, 1.0, {2.0, 0.0}, 1.0);
    CHECK(psi_kernel(params, two) == doctest::Approx(1.0 / (8.0 * kPi)).epsilon(1e-14));

    const KernelParams p42(4, 2.0);
    auto unit4 = make_pair({0.0, 0.0, 0.0}, 1.0, {1.0, 0.0, 0.0}, 1.0);
    CHECK(psi_kernel(p42, unit4) == doctest::Approx(psi_prefactor(4, 2.0)).epsilon(1e-14));
}

TEST_CASE("translated kernel: identity at zero, monotone, riesz limit") {
    const KernelParams params(3, 2.0);
    auto pair = make_pair({0.0, 0.0}, 1.0, {1.0, 0.0}, 1.0);
    CHECK(phi_translated(params, pair, 0.0) ==
          doctest::Approx(phi_kernel(params, pair)).epsilon(1e-15));

    double prev = 0.0;
    for (double a : {0.0, 1.0, 10.0, 100.0, 1000.0}) {
        const double v = phi_translated(params, pair, a);
        CHECK(v > prev);
        prev = v;
    }
    CHECK(phi_translated(params, pair, 1e4) ==
          doctest::Approx(psi_kernel(params, pair)).epsilon(1e-3));
    CHECK_THROWS_AS(phi_translated(params, pair, -1.0), InvalidArgument);
}

TEST_CASE("phi is dominated by psi in the bounded regime") {
    Rng rng(23);
    for (auto [n, alpha] : {std::pair<int, double>{3, 2.0}, {4, 3.0}}) {
        const KernelParams params(n, alpha);
        for (int k = 0; k < 200; ++k) {
            Vec x1(n - 1), x2(n - 1);
            for (auto& v : x1) v = rng.uniform(-2.0, 2.0);
            for (auto& v : x2) v = rng.uniform(-2.0, 2.0);
            auto pair = make_pair(x1, rng.uniform(0.1, 3.0), x2, rng.uniform(0.1, 3.0));
            if (pair.distance() < 1e-3) continue;
            CHECK(phi_kernel(params, pair) < psi_kernel(params, pair));
        }
    }
}

TEST_CASE("mellin route reproduces the kernel") {
    const KernelParams params(3, 2.0);
    const std::vector<KernelPointPair> pairs = {
        make_pair({0.0, 0.0}, 1.0, {1.0, 0.0}, 1.0),
        make_pair({0.2, -0.1}, 0.5, {0.4, 0.1}, 2.0),
        make_pair({-1.0, 0.5}, 1.5, {0.8, 0.3}, 0.7),
    };
    for (const auto& pair : pairs) {
        const auto mellin = phi_via_mellin(params, pair, 1e-8);
        CHECK(mellin.value == doctest::Approx(phi_kernel(params, pair)).epsilon(1e-4));
    }
}
