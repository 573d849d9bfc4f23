#include <cmath>
#include <numbers>

#include <doctest.h>

#include "hsm/functionals.hpp"
#include "hsm/kernels.hpp"
#include "hsm/quadrature.hpp"
#include "hsm/special.hpp"

using namespace hsm;

namespace {
constexpr double kPi = std::numbers::pi;

double bessel_i0_series(double c) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        term *= (0.25 * c * c) / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-19 * sum) break;
    }
    return sum;
}

double trapezoid(const QuadratureRule& rule, const std::function<double(double)>& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(rule.nodes[i]);
    return s;
}
}  // namespace

TEST_CASE("periodic rule and integrator") {
    auto rule = periodic_rule(16);
    CHECK(rule.nodes.size() == 16);
    double total = 0.0;
    for (double w : rule.weights) total += w;
    CHECK(total == doctest::Approx(2.0 * kPi).epsilon(1e-15));
    CHECK_THROWS_AS(periodic_rule(12), InvalidArgument);

    CHECK(periodic_integrate([](double) { return 1.0; }) ==
          doctest::Approx(2.0 * kPi).epsilon(1e-14));
    CHECK(std::abs(periodic_integrate([](double phi) { return std::cos(phi); })) < 1e-13);

    const double want = 2.0 * kPi * bessel_i0_series(1.0);
    CHECK(periodic_integrate([](double phi) { return std::exp(std::cos(phi)); }) ==
          doctest::Approx(want).epsilon(1e-13));
    CHECK(want == doctest::Approx(7.95492652101284).epsilon(1e-13));
}

TEST_CASE("periodic trapezoid converges geometrically on analytic integrands") {
    const double exact = 2.0 * kPi * bessel_i0_series(1.0);
    auto f = [](double phi) { return std::exp(std::cos(phi)); };
    const double err8 = std::abs(trapezoid(periodic_rule(8), f) - exact);
    const double err16 = std::abs(trapezoid(periodic_rule(16), f) - exact);
    CHECK(err8 < 1e-5);
    CHECK(err16 <= 10.0 * err8 * err8 + 1e-14);
}

TEST_CASE("periodic integrator reports non-convergence") {
    // needle of width ~1e-6 cannot converge within the node cap
    auto needle = [](double phi) { return 1.0 / (1e-12 + phi * phi); };
    CHECK_THROWS_AS(periodic_integrate(needle), NumericsError);
    auto st = periodic_integrate_status(needle);
    CHECK_FALSE(st.converged);
    CHECK(st.nodes == (1 << 16));
}

TEST_CASE("adaptive integrator handles the reference integrals") {
    auto decay = adaptive_integrate([](double t) { return std::exp(-t); }, 0.0, kInfinity, 1e-10);
    CHECK(decay.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(decay.error <= 1e-10 * 2);

    auto line = adaptive_integrate([](double x) { return std::pow(1.0 + x * x, -0.75); },
                                   -kInfinity, kInfinity, 1e-8);
    CHECK(line.value == doctest::Approx(5.2441151086).epsilon(1e-7));

    auto endpoint = adaptive_integrate([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 1.0,
                                       1e-9);
    CHECK(endpoint.value == doctest::Approx(2.0).epsilon(1e-8));

    CHECK(adaptive_integrate([](double) { return 1.0; }, 2.0, 2.0, 1e-10).value == 0.0);
    CHECK_THROWS_AS(adaptive_integrate([](double) { return 1.0; }, 1.0, 0.0, 1e-10),
                    InvalidArgument);
}

TEST_CASE("adaptive integrator reports budget exhaustion") {
    auto wild = [](double t) { return std::sin(1.0 / (t + 1e-14)); };
    CHECK_THROWS_AS(adaptive_integrate(wild, 0.0, 1.0, 1e-14, 600), NumericsError);
}

TEST_CASE("half-space grid integrates polynomials and localized functions") {
    auto grid = build_halfspace_grid(3, 1.0, 1.0, 16, 2.0);
    CHECK(grid.size() == 16u * 16u * 16u);
    CHECK(grid.total_weight() == doctest::Approx(4.0).epsilon(1e-13));

    auto grid64 = build_halfspace_grid(3, 1.0, 1.0, 64, 2.0);
    const double y_int = integrate_on_grid(grid64, [](std::span<const double> p) { return p[2]; });
    CHECK(y_int == doctest::Approx(2.0).epsilon(1e-3));

    auto wide = build_halfspace_grid(3, 8.0, 8.0, 64, 2.0);
    const double gauss = integrate_on_grid(wide, [](std::span<const double> p) {
        return std::exp(-(p[0] * p[0] + p[1] * p[1]) - p[2]);
    });
    CHECK(gauss == doctest::Approx(kPi).epsilon(1e-3));

    Vec lo, hi;
    grid.bounding_box(lo, hi);
    CHECK(lo[2] == 0.0);
    CHECK(hi[2] == 1.0);
    CHECK(lo[0] == -1.0);

    // height nodes strictly positive
    bool positive = true;
    grid.for_each([&](std::span<const double> p, double) { positive &= (p[2] > 0.0); });
    CHECK(positive);

    CHECK_THROWS_AS(build_halfspace_grid(3, 1.0, 1.0, 4, 2.0), InvalidArgument);
    CHECK_THROWS_AS(build_halfspace_grid(3, 1.0, 1.0, 16, 0.5), InvalidArgument);
}

TEST_CASE("window grid covers a shifted box") {
    auto grid = halfspace_window_grid(3, {0.0, 0.0, 2.0}, {0.5, 0.5, 0.5}, 12, 3.0);
    CHECK(grid.total_weight() == doctest::Approx(1.0).epsilon(1e-12));
    Vec lo, hi;
    grid.bounding_box(lo, hi);
    CHECK(lo[2] == doctest::Approx(1.5));
    CHECK(hi[2] == doctest::Approx(2.5));
    CHECK_THROWS_AS(halfspace_window_grid(3, {0.0, 0.0, 0.2}, {0.5, 0.5, 0.5}, 12, 1.0),
                    InvalidArgument);
}

TEST_CASE("ball grid carries exact cell measures") {
    auto b3 = ball_grid(3, 24, 12, 0.0, 1.0);
    CHECK(b3.total_weight() == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-13));

    auto b4 = ball_grid(4, 12, 8, 0.0, 1.0);
    CHECK(b4.total_weight() == doctest::Approx(0.5 * kPi * kPi).epsilon(1e-13));

    auto shell = ball_grid(3, 16, 8, 1.5, 2.5);
    CHECK(shell.domain() == Domain::BallExterior);
    CHECK(shell.total_weight() ==
          doctest::Approx(4.0 * kPi / 3.0 * (2.5 * 2.5 * 2.5 - 1.5 * 1.5 * 1.5)).epsilon(1e-13));

    // moment oracle: integral of |x|^2 over the unit 3-ball is 4 pi / 5
    auto fine = ball_grid(3, 96, 24, 0.0, 1.0);
    const double moment = integrate_on_grid(fine, [](std::span<const double> p) {
        return norm_sq(p);
    });
    CHECK(moment == doctest::Approx(4.0 * kPi / 5.0).epsilon(1e-4));

    // all radii strictly inside the closed shell
    bool inside = true;
    b3.for_each([&](std::span<const double> p, double) { inside &= (norm(p) < 1.0); });
    CHECK(inside);
}

TEST_CASE("singular quadratic form reproduces the uniform-ball energy") {
    // classical closed form: for unit charge in a ball of radius R the kernel
    // 1/(4 pi |x-y|) integrates to 3/(10 pi R)
    const double R = 0.8;
    const Vec center = {0.0, 0.0, 2.0};
    auto grid = halfspace_window_grid(3, center, {0.9, 0.9, 0.9}, 20, 1.0);
    const double rho = 1.0 / (4.0 / 3.0 * kPi * R * R * R);

    std::vector<double> values;
    values.reserve(grid.size());
    const double cell = 2.0 * 0.9 / 20.0;
    const double cell_rad = 0.5 * cell * std::sqrt(3.0);
    grid.for_each([&](std::span<const double> p, double) {
        const double d = std::sqrt((p[0] - center[0]) * (p[0] - center[0]) +
                                   (p[1] - center[1]) * (p[1] - center[1]) +
                                   (p[2] - center[2]) * (p[2] - center[2]));
        if (d <= R - cell_rad) {
            values.push_back(rho);
        } else if (d >= R + cell_rad) {
            values.push_back(0.0);
        } else {
            int in = 0;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    for (int c = 0; c < 4; ++c) {
                        const double q0 = p[0] + cell * ((a + 0.5) / 4.0 - 0.5);
                        const double q1 = p[1] + cell * ((b + 0.5) / 4.0 - 0.5);
                        const double q2 = p[2] + cell * ((c + 0.5) / 4.0 - 0.5);
                        const double dd = std::sqrt((q0 - center[0]) * (q0 - center[0]) +
                                                    (q1 - center[1]) * (q1 - center[1]) +
                                                    (q2 - center[2]) * (q2 - center[2]));
                        if (dd <= R) ++in;
                    }
            values.push_back(rho * in / 64.0);
        }
    });

    const double pref = psi_prefactor(3, 2.0);
    SingularKernel coulomb;
    coulomb.order = 1.0;
    coulomb.diag_coeff = pref;
    coulomb.eval = [pref](std::span<const double> a, std::span<const double> b) {
        return psi_eval_raw(3, 2.0, pref, a, b);
    };
    auto energy = quadratic_form_singular(coulomb, values, grid);
    CHECK(energy.value == doctest::Approx(3.0 / (10.0 * kPi * R)).epsilon(0.01));

    // zero data gives zero; positive data with a positive kernel stays positive
    std::vector<double> zeros(grid.size(), 0.0);
    CHECK(quadratic_form_singular(coulomb, zeros, grid).value == 0.0);
    CHECK(energy.value > 0.0);
}

TEST_CASE("grid sums do not depend on node ordering") {
    auto grid = halfspace_window_grid(3, {0.0, 0.0, 1.0}, {0.5, 0.5, 0.5}, 10, 2.0);
    auto f = [](std::span<const double> p) { return std::cos(p[0]) * p[2] + p[1] * p[1]; };
    const double forward = integrate_on_grid(grid, f);

    std::vector<double> pts, w;
    grid.materialize(pts, w);
    Accumulator reversed;
    for (std::size_t i = w.size(); i-- > 0;)
        reversed.add(w[i] * f(std::span<const double>(&pts[i * 3], 3)));
    CHECK(forward == doctest::Approx(reversed.value()).epsilon(1e-13));
}

TEST_CASE("singular quadratic form converges under refinement to the stored baseline") {
    // fixed bump at unit height against the green kernel at (3,2); the
    // Richardson value over m in {10,14,20} is frozen as a regression anchor
    const double pref = phi_prefactor(3, 2.0);
    SingularKernel kernel;
    kernel.order = 1.0;
    kernel.diag_coeff = psi_prefactor(3, 2.0);
    kernel.eval = [pref](std::span<const double> a, std::span<const double> b) {
        return phi_eval_raw(3, 2.0, pref, a, b);
    };
    auto f = smooth_bump(Domain::HalfSpace, {0.0, 0.0, 1.0}, 0.6);

    const int ms[3] = {10, 14, 20};
    double vals[3];
    for (int i = 0; i < 3; ++i) {
        auto grid =
            halfspace_window_grid(3, {0.0, 0.0, 1.0}, {0.63, 0.63, 0.63}, ms[i], 1.0);
        auto values = sample_on_grid(f, grid);
        vals[i] = quadratic_form_singular(kernel, values, grid).value;
    }
    // refinement deltas shrink like h^2
    CHECK(std::abs(vals[2] - vals[1]) < std::abs(vals[1] - vals[0]));
    const double h1 = 1.0 / (14.0 * 14.0), h2 = 1.0 / (20.0 * 20.0);
    const double rich = vals[2] + (vals[2] - vals[1]) * h2 / (h1 - h2);
    CHECK(rich == doctest::Approx(0.00449329609986).epsilon(5e-3));
}

TEST_CASE("singular quadratic form input validation") {
    auto grid = halfspace_window_grid(3, {0.0, 0.0, 1.0}, {0.5, 0.5, 0.5}, 4, 1.0);
    SingularKernel k;
    k.order = 5.0;  // not integrable in 3-d
    k.diag_coeff = 1.0;
    k.eval = [](std::span<const double>, std::span<const double>) { return 1.0; };
    std::vector<double> v(grid.size(), 1.0);
    CHECK_THROWS_AS(quadratic_form_singular(k, v, grid), InvalidArgument);
    k.order = 1.0;
    std::vector<double> bad(grid.size() + 1, 1.0);
    CHECK_THROWS_AS(quadratic_form_singular(k, bad, grid), InvalidArgument);
}
