#include <cmath>

#include <doctest.h>

#include "hsm/geometry.hpp"

using namespace hsm;

TEST_CASE("point construction guards the boundaries") {
    CHECK_THROWS_AS(HalfSpacePoint({0.0, 0.0}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(HalfSpacePoint({0.0, 0.0}, -1.0), InvalidArgument);
    CHECK_THROWS_AS(HalfSpacePoint({0.0, 0.0}, 5e-15), InvalidArgument);
    CHECK_NOTHROW(HalfSpacePoint({0.0, 0.0}, 1e-13));

    CHECK_THROWS_AS(BallPoint({1.0, 0.0, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(BallPoint({0.6, 0.6, 0.6}), InvalidArgument);
    CHECK_NOTHROW(BallPoint({0.5, 0.5, 0.5}));

    CHECK_THROWS_AS(HyperboloidPoint({0.0, 0.0, 0.0}, 0.5), InvalidArgument);
    CHECK_THROWS_AS(HyperboloidPoint({1.0, 0.0, 0.0}, 1.0), InvalidArgument);
    CHECK_NOTHROW(HyperboloidPoint({0.0, 0.0, 0.0}, 1.0));
}

TEST_CASE("mobius map hits the reference points") {
    // axis point at unit height goes to the center
    auto b1 = mobius_to_ball(HalfSpacePoint({0.0, 0.0}, 1.0));
    CHECK(b1.radius() < 1e-15);

    // height three lands on the axis at -1/2
    auto b2 = mobius_to_ball(HalfSpacePoint({0.0, 0.0}, 3.0));
    CHECK(b2.omega()[0] == doctest::Approx(0.0));
    CHECK(b2.omega()[2] == doctest::Approx(-0.5).epsilon(1e-14));

    // ((1,0), 1): denominator 5, last entry -1/5
    auto b3 = mobius_to_ball(HalfSpacePoint({1.0, 0.0}, 1.0));
    CHECK(b3.omega()[0] == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(b3.omega()[1] == doctest::Approx(0.0));
    CHECK(b3.omega()[2] == doctest::Approx(-0.2).epsilon(1e-14));
}

TEST_CASE("mobius inverse hits the reference points and closes round trips") {
    auto p1 = mobius_from_ball(BallPoint({0.0, 0.0, 0.0}));
    CHECK(p1.y() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(norm(p1.x()) < 1e-15);

    auto p2 = mobius_from_ball(BallPoint({0.0, 0.0, -0.5}));
    CHECK(p2.y() == doctest::Approx(3.0).epsilon(1e-14));

    Rng rng(7);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        Vec om = {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
        BallPoint b(om);
        auto back = mobius_to_ball(mobius_from_ball(b));
        for (int i = 0; i < 3; ++i)
            worst = std::max(worst, std::abs(back.omega()[i] - om[i]));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("boundary goes to boundary") {
    for (double y : {1e-4, 1e-6, 1e-8}) {
        auto b = mobius_to_ball(HalfSpacePoint({0.3, -0.2}, y));
        CHECK(1.0 - b.radius() < 10.0 * y);
    }
}

TEST_CASE("hyperboloid lift") {
    auto apex = lift_to_hyperboloid(BallPoint({0.0, 0.0, 0.0}));
    CHECK(apex.v() == doctest::Approx(1.0));
    CHECK(norm(apex.u()) < 1e-15);

    auto h = lift_to_hyperboloid(BallPoint({0.5, 0.0, 0.0}));
    CHECK(h.u()[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(h.v() == doctest::Approx(5.0 / 3.0).epsilon(1e-14));

    Rng rng(11);
    for (int k = 0; k < 300; ++k) {
        Vec om = {rng.uniform(-0.56, 0.56), rng.uniform(-0.56, 0.56), rng.uniform(-0.56, 0.56)};
        auto hp = lift_to_hyperboloid(BallPoint(om));
        const double nu = norm(hp.u());
        CHECK(std::abs((hp.v() - nu) * (hp.v() + nu) - 1.0) <
              1e-12 * std::max(1.0, hp.v() * hp.v()));
        CHECK(hp.v() >= 1.0);
    }
}

TEST_CASE("conformal weights") {
    CHECK(conformal_weight_half(HalfSpacePoint({0.0, 0.0}, 1.0)) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(conformal_weight_half(HalfSpacePoint({0.0, 0.0, 0.0}, 1.0)) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(conformal_weight_half(HalfSpacePoint({1.0, 0.0}, 1.0)) ==
          doctest::Approx(std::sqrt(0.4)).epsilon(1e-14));

    CHECK(conformal_weight_ball(BallPoint({0.0, 0.0, 0.0})) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(conformal_weight_ball(BallPoint({0.0, 0.0, 0.0, 0.0})) == doctest::Approx(2.0));
    CHECK(conformal_weight_ball(BallPoint({0.5, 0.0, 0.0})) ==
          doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-14));

    CHECK_THROWS_AS(conformal_weight_half(HalfSpacePoint({0.0}, 1.0)), InvalidArgument);
}

TEST_CASE("the two pullback weights compose to the direct one") {
    Rng rng(13);
    for (int k = 0; k < 200; ++k) {
        const int n = 3 + static_cast<int>(rng.bits() % 3);
        Vec x(n - 1);
        for (auto& v : x) v = rng.uniform(-2.0, 2.0);
        HalfSpacePoint p(x, rng.uniform(0.05, 4.0));
        const double combined =
            conformal_weight_half(p) * conformal_weight_ball(mobius_to_ball(p));
        CHECK(combined == doctest::Approx(std::pow(p.y(), -0.5 * (n - 2))).epsilon(1e-12));
    }
}

TEST_CASE("kelvin inversion") {
    auto res = kelvin_invert(Vec{2.0, 0.0, 0.0});
    CHECK(res.point.omega()[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(res.weight == doctest::Approx(0.5).epsilon(1e-15));

    auto res4 = kelvin_invert(Vec{2.0, 0.0, 0.0, 0.0});
    CHECK(res4.weight == doctest::Approx(0.25).epsilon(1e-15));

    CHECK_THROWS_AS(kelvin_invert(Vec{0.5, 0.0, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(kelvin_invert(Vec{1.0, 0.0, 0.0}), InvalidArgument);

    // involution with unit weight product
    Rng rng(17);
    for (int k = 0; k < 100; ++k) {
        Vec z = {rng.uniform(1.2, 4.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        auto inv = sphere_invert(z);
        auto back = sphere_invert(inv);
        for (int i = 0; i < 3; ++i) CHECK(back[i] == doctest::Approx(z[i]).epsilon(1e-13));
        CHECK(std::pow(norm(z), -1.0) * std::pow(norm(inv), -1.0) ==
              doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("mobius jacobian is conformal") {
    Rng rng(19);
    for (int k = 0; k < 100; ++k) {
        Vec x = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        HalfSpacePoint p(x, rng.uniform(0.1, 3.0));
        auto jac = mobius_jacobian(p);
        const double s = mobius_conformal_factor(p);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                double dotv = 0.0;
                for (int i = 0; i < 3; ++i) dotv += jac[i][a] * jac[i][b];
                CHECK(dotv == doctest::Approx(a == b ? s * s : 0.0).epsilon(1e-10).scale(s * s));
            }
    }
}
