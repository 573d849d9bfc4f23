#pragma once

#include <functional>
#include <string>

#include "hsm/kernels.hpp"
#include "hsm/quadrature.hpp"

namespace hsm {

// Ball (optionally annular) region the function is known to vanish outside.
struct Support {
    Vec center;
    double radius = 0.0;
    double inner_radius = 0.0;
};

struct TrialFunction {
    int dim = 0;
    Domain domain = Domain::HalfSpace;
    Support support;
    std::function<double(std::span<const double>)> value;
    std::function<void(std::span<const double>, std::span<double>)> gradient;
};

// C^2 compactly supported profile amplitude * (1 - (rho/width)^2)^3.
TrialFunction smooth_bump(Domain domain, Vec center, double width, double amplitude = 1.0);

// C^4 variant amplitude * (1 - (rho/width)^2)^5; its extra smoothness keeps
// short-time expansions clean.
TrialFunction smooth_bump_c4(Domain domain, Vec center, double width, double amplitude = 1.0);

// Seeded sum of smooth bumps with centers in [center_lo, center_hi].
TrialFunction bump_mixture(Domain domain, int dim, Rng& rng, const Vec& center_lo,
                           const Vec& center_hi, double width_min, double width_max,
                           int parts, bool nonnegative);

// Concentrating optimizer profile (eps/(eps^2+rho^2))^{(n-2)/2} centered at
// height h on the half-space axis, multiplied by a C^2 cutoff that is 1 on
// rho <= R/2 and 0 outside rho = R. Requires R < h.
TrialFunction bubble_family(double epsilon, double center_height, double cutoff_radius,
                            int n);

// f(x,y) = (2/((1+y)^2+|x|^2))^{(n-2)/2} g(B(x,y)) for g on the ball with
// support centered at the origin.
TrialFunction pullback_halfspace_from_ball(const TrialFunction& g);

// g(Omega) = (2/(1-|Omega|^2))^{(n-2)/2} k(Omega).
TrialFunction ball_weighted_from_hyperbolic(const TrialFunction& k);

// g*(z) = |z|^{2-n} g(z/|z|^2) for g supported on an exterior annulus.
TrialFunction kelvin_pullback(const TrialFunction& exterior);

// Max relative deviation between the gradient evaluator and centered finite
// differences at random points inside the support.
double gradient_fd_max_error(const TrialFunction& f, Rng& rng, int samples,
                             double step = 1e-4);

// Int [ |grad f|^2 - f^2/(4 y^2) ] over a half-space grid.
double hardy_form(const TrialFunction& f, const TensorGrid& grid);

// Int [ |grad g|^2 - g^2/(1-|Omega|^2)^2 ] over a ball grid.
double ball_form(const TrialFunction& g, const TensorGrid& grid);

// Same with the distance-to-boundary weight 1/(4 (1-|Omega|)^2).
double ball_form_distance_weight(const TrialFunction& g, const TensorGrid& grid);

struct HyperbolicForm {
    double form = 0.0;  // Int |grad k|^2 dVol - ((n-1)^2/4) Int k^2 dVol
    double mass = 0.0;  // Int k^2 dVol
};

// Evaluated in the conformal ball model: volume element (2/(1-r^2))^n,
// gradient weight ((1-r^2)/2)^2.
HyperbolicForm hyperbolic_form(const TrialFunction& k, const TensorGrid& grid);

double lp_norm(const TrialFunction& f, double p, const TensorGrid& grid);

struct QuotientResult {
    double form = 0.0;
    double norm = 0.0;       // critical L^p norm
    double quotient = 0.0;   // form / norm^2
    double err_estimate = 0.0;
};

// Quotient of the Hardy-penalized Dirichlet form by the squared critical
// L^{2n/(n-2)} norm. When a coarse companion grid is supplied the difference
// between the two evaluations becomes the error estimate.
QuotientResult rayleigh_quotient(const TrialFunction& f, const TensorGrid& grid,
                                 const TensorGrid* coarse = nullptr);

// Quotient of (f, Phi f) by the squared L^{2n/(n+alpha)} norm. Requires the
// bounded regime n-1 <= alpha < n and nonzero f.
QuotientResult hls_quotient(const TrialFunction& f, const KernelParams& params,
                            const TensorGrid& grid, const TensorGrid* coarse = nullptr);

// Same quadratic form with the Riesz kernel substituted for Phi.
QuotientResult hls_quotient_riesz(const TrialFunction& f, const KernelParams& params,
                                  const TensorGrid& grid, const TensorGrid* coarse = nullptr);

// Weighted l2 quantities for grid data.
double grid_l2_norm(std::span<const double> values, const TensorGrid& grid);
double grid_inner(std::span<const double> a, std::span<const double> b,
                  const TensorGrid& grid);

// Dense application of the heat kernel: out_i = sum_j w_j G(p_i, p_j; t) f_j.
std::vector<double> heat_apply(const KernelParams& params, const TensorGrid& grid,
                               std::span<const double> values, double t);

// Samples a trial function on the grid.
std::vector<double> sample_on_grid(const TrialFunction& f, const TensorGrid& grid);

// q(t) = (||f||^2 - (f, G_t f)) / t for each t; converges to the Hardy form
// as t -> 0 for smooth compactly supported f.
std::vector<double> generator_limit(const KernelParams& params, const TrialFunction& f,
                                    std::span<const double> t_sequence,
                                    const TensorGrid& grid);

struct SweepRow {
    double epsilon = 0.0;
    double form = 0.0;
    double norm = 0.0;
    double quotient = 0.0;
    double err_estimate = 0.0;
};

struct SweepConfig {
    double eps_start = 1.0;
    double eps_end = 0.015625;
    int steps = 7;
    double height = 4.0;
    double radius = 3.5;
    int grid_m = 128;
    double grading = 3.0;
    int n = 3;
};

// Rayleigh quotients of the concentrating family on a center-graded window
// grid; epsilon is swept geometrically from eps_start to eps_end.
std::vector<SweepRow> bubble_sweep(const SweepConfig& config);

// CSV columns: epsilon,form,norm,quotient,err_estimate.
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

}  // namespace hsm
