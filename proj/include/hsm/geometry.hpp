#pragma once

#include <span>

#include "hsm/common.hpp"

namespace hsm {

// Points within kBoundaryMargin of a domain boundary are rejected rather than
// clamped: every downstream kernel is singular there, and silent clamping
// would corrupt limit checks.
inline constexpr double kBoundaryMargin = 1e-14;

// (x, y) with x in R^{n-1} and y > 0; y is the distance to the boundary.
class HalfSpacePoint {
  public:
    HalfSpacePoint(Vec x, double y);

    const Vec& x() const { return x_; }
    double y() const { return y_; }
    int dim() const { return static_cast<int>(x_.size()) + 1; }

  private:
    Vec x_;
    double y_;
};

// Interior point of the unit ball.
class BallPoint {
  public:
    explicit BallPoint(Vec omega);

    const Vec& omega() const { return omega_; }
    double radius() const { return radius_; }
    int dim() const { return static_cast<int>(omega_.size()); }

  private:
    Vec omega_;
    double radius_;
};

// Upper sheet {v^2 - |u|^2 = 1, v >= 1}.
class HyperboloidPoint {
  public:
    HyperboloidPoint(Vec u, double v);

    const Vec& u() const { return u_; }
    double v() const { return v_; }
    int dim() const { return static_cast<int>(u_.size()); }

  private:
    Vec u_;
    double v_;
};

// Conformal bijection of the half-space onto the unit ball:
// Omega = (2x, 1 - |x|^2 - y^2) / ((1+y)^2 + |x|^2).
BallPoint mobius_to_ball(const HalfSpacePoint& p);
HalfSpacePoint mobius_from_ball(const BallPoint& b);

// (u, v) = (2 Omega, 1 + |Omega|^2) / (1 - |Omega|^2).
HyperboloidPoint lift_to_hyperboloid(const BallPoint& b);

// (2 / ((1+y)^2 + |x|^2))^{(n-2)/2}, n >= 3.
double conformal_weight_half(const HalfSpacePoint& p);

// (2 / (1 - |Omega|^2))^{(n-2)/2}, n >= 3.
double conformal_weight_ball(const BallPoint& b);

// Inversion through the unit sphere, defined for any nonzero point.
Vec sphere_invert(std::span<const double> point);

struct KelvinResult {
    BallPoint point;   // Omega / |Omega|^2
    double weight;     // |Omega|^{-(n-2)}
};

// Pulls a point outside the closed unit ball into the ball; a function g on
// the complement pulls back as g*(Omega) = weight * g(point).
KelvinResult kelvin_invert(std::span<const double> omega_outside);

// Jacobian of the half-space -> ball map, row i = d Omega_i / d (x..., y).
// The map is conformal with factor 2 / ((1+y)^2 + |x|^2).
std::vector<Vec> mobius_jacobian(const HalfSpacePoint& p);
double mobius_conformal_factor(const HalfSpacePoint& p);

}  // namespace hsm
