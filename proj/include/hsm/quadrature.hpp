#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "hsm/common.hpp"

namespace hsm {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
};

enum class Domain { PeriodicAngle, RadialTime, HalfSpace, Ball, BallExterior };

// Plain 1-D rule: paired nodes and weights on a tagged domain.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    Domain domain = Domain::PeriodicAngle;
};

// Equispaced rule on [-pi, pi); exact total measure 2 pi.
QuadratureRule periodic_rule(int n);

struct PeriodicStatus {
    double value = 0.0;
    int nodes = 0;
    bool converged = false;
    double last_delta = 0.0;
    double previous = 0.0;
};

// Equispaced trapezoid on the period, doubling the node count until two
// successive values agree to tol (relative to max(1,|I|)) or n_max is hit.
PeriodicStatus periodic_integrate_status(const std::function<double(double)>& f,
                                         int n_start = 256, double tol = 1e-12,
                                         int n_max = 1 << 16);

// Throwing wrapper: NumericsError on non-convergence, message carries the
// last two values.
double periodic_integrate(const std::function<double(double)>& f, int n_start = 256,
                          double tol = 1e-12, int n_max = 1 << 16);

// Adaptive Gauss-Kronrod (7-15) bisection. Endpoints may be infinite; the
// integrand is then mapped through u -> a + u/(1-u) (and mirrored). Stops when
// the accumulated error estimate drops below max(tol, tol*|I|); throws
// NumericsError once max_evaluations function calls were spent.
IntegralResult adaptive_integrate(const std::function<double(double)>& f, double a,
                                  double b, double tol, long max_evaluations = 1000000);

// Tensor-product grid. Axes hold computational coordinates; spherical grids
// map (r, theta..., phi) to cartesian points on the fly and carry the exact
// cell measures in the axis weights, so integrating 1 reproduces the domain
// volume to machine precision.
class TensorGrid {
  public:
    struct Axis {
        std::vector<double> nodes;
        std::vector<double> weights;
    };

    TensorGrid(Domain domain, std::vector<Axis> axes, bool spherical);

    Domain domain() const { return domain_; }
    int dim() const { return static_cast<int>(axes_.size()); }
    bool spherical() const { return spherical_; }
    std::size_t size() const { return size_; }
    const std::vector<Axis>& axes() const { return axes_; }

    double total_weight() const;

    // Exact axis-aligned extent of the discretized domain (cartesian
    // coordinates). Builders set it from the cell edges; without it the node
    // extent is reported.
    void set_box(Vec lo, Vec hi);
    void bounding_box(Vec& lo, Vec& hi) const;

    void materialize(std::vector<double>& points, std::vector<double>& weights) const;

    // Row-major iteration over the product grid: fn(point_span, weight).
    template <class F>
    void for_each(F&& fn) const {
        const int d = dim();
        std::vector<std::size_t> idx(d, 0);
        std::vector<double> comp(d), cart(d);
        for (std::size_t flat = 0; flat < size_; ++flat) {
            double w = 1.0;
            for (int k = 0; k < d; ++k) {
                comp[k] = axes_[k].nodes[idx[k]];
                w *= axes_[k].weights[idx[k]];
            }
            if (spherical_) {
                to_cartesian(comp, cart);
                fn(std::span<const double>(cart), w);
            } else {
                fn(std::span<const double>(comp), w);
            }
            for (int k = d - 1; k >= 0; --k) {
                if (++idx[k] < axes_[k].nodes.size()) break;
                idx[k] = 0;
            }
        }
    }

  private:
    void to_cartesian(const std::vector<double>& comp, std::vector<double>& cart) const;

    Domain domain_;
    std::vector<Axis> axes_;
    bool spherical_;
    std::size_t size_;
    Vec box_lo_, box_hi_;
};

// Grid on [-L, L]^{n-1} x (0, H], m nodes per axis, midpoint weights.
// Height cell edges are H*(j/m)^grading, clustering nodes toward y = 0.
TensorGrid build_halfspace_grid(int n, double half_width, double height_cap, int m,
                                double grading);

// Grid on a box centered at `center` (last coordinate is the height), with
// per-axis half widths and nodes graded toward the center. grading = 1 gives
// uniform cells. The box must stay inside the half-space.
TensorGrid halfspace_window_grid(int n, const Vec& center, const Vec& half_widths,
                                 int m, double grading = 1.0);

// Spherical-coordinate grid on {r_min <= |x| <= r_max}, exact cell measures.
// log_radial switches the radial subdivision from linear to geometric.
TensorGrid ball_grid(int n, int m_radial, int m_angular, double r_min, double r_max,
                     bool log_radial = false);

// Deterministic single sum over the grid.
template <class F>
double integrate_on_grid(const TensorGrid& grid, F&& fn) {
    Accumulator acc;
    grid.for_each([&](std::span<const double> p, double w) { acc.add(w * fn(p)); });
    return acc.value();
}

// Kernel with a leading singularity diag_coeff * |p-q|^{-order} at p = q.
struct SingularKernel {
    std::function<double(std::span<const double>, std::span<const double>)> eval;
    double order = 0.0;
    double diag_coeff = 0.0;
};

// Double sum sum_{i != j} w_i w_j f_i K(p_i,p_j) f_j plus a diagonal
// correction that integrates the leading singular term over an equal-volume
// ball per cell. The reported error is the magnitude of that correction.
IntegralResult quadratic_form_singular(const SingularKernel& kernel,
                                       std::span<const double> f_values,
                                       const TensorGrid& grid);

}  // namespace hsm
