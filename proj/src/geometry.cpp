#include "hsm/geometry.hpp"

#include <cmath>
#include <sstream>

namespace hsm {

HalfSpacePoint::HalfSpacePoint(Vec x, double y) : x_(std::move(x)), y_(y) {
    if (x_.empty()) throw InvalidArgument("HalfSpacePoint: dimension must be >= 2");
    if (!(y_ >= kBoundaryMargin)) {
        std::ostringstream os;
        os << "HalfSpacePoint: y = " << y_ << " is on or below the boundary";
        throw InvalidArgument(os.str());
    }
}

BallPoint::BallPoint(Vec omega) : omega_(std::move(omega)) {
    if (omega_.empty()) throw InvalidArgument("BallPoint: dimension must be >= 1");
    radius_ = norm(omega_);
    if (!(radius_ < 1.0 - kBoundaryMargin)) {
        std::ostringstream os;
        os << "BallPoint: |Omega| = " << radius_ << " is on or outside the sphere";
        throw InvalidArgument(os.str());
    }
}

HyperboloidPoint::HyperboloidPoint(Vec u, double v) : u_(std::move(u)), v_(v) {
    if (u_.empty()) throw InvalidArgument("HyperboloidPoint: dimension must be >= 1");
    if (!(v_ >= 1.0)) throw InvalidArgument("HyperboloidPoint: v must be >= 1");
    const double nu = norm(u_);
    const double defect = (v_ - nu) * (v_ + nu) - 1.0;
    if (std::abs(defect) > 1e-12 * std::max(1.0, v_ * v_)) {
        std::ostringstream os;
        os << "HyperboloidPoint: v^2 - |u|^2 - 1 = " << defect << " violates the sheet constraint";
        throw InvalidArgument(os.str());
    }
}

BallPoint mobius_to_ball(const HalfSpacePoint& p) {
    const Vec& x = p.x();
    const double y = p.y();
    const double xsq = norm_sq(x);
    const double denom = (1.0 + y) * (1.0 + y) + xsq;
    Vec omega(p.dim());
    for (std::size_t i = 0; i < x.size(); ++i) omega[i] = 2.0 * x[i] / denom;
    omega.back() = (1.0 - xsq - y * y) / denom;
    return BallPoint(std::move(omega));
}

HalfSpacePoint mobius_from_ball(const BallPoint& b) {
    const Vec& om = b.omega();
    const int n = b.dim();
    if (n < 2) throw InvalidArgument("mobius_from_ball: dimension must be >= 2");
    double wsq = 0.0;
    for (int i = 0; i + 1 < n; ++i) wsq += om[i] * om[i];
    const double last = om[n - 1];
    const double denom = (1.0 + last) * (1.0 + last) + wsq;
    Vec x(n - 1);
    for (int i = 0; i + 1 < n; ++i) x[i] = 2.0 * om[i] / denom;
    const double y = (1.0 - b.radius() * b.radius()) / denom;
    return HalfSpacePoint(std::move(x), y);
}

HyperboloidPoint lift_to_hyperboloid(const BallPoint& b) {
    const double rsq = b.radius() * b.radius();
    const double factor = 1.0 / (1.0 - rsq);
    Vec u(b.dim());
    for (int i = 0; i < b.dim(); ++i) u[i] = 2.0 * b.omega()[i] * factor;
    return HyperboloidPoint(std::move(u), (1.0 + rsq) * factor);
}

double conformal_weight_half(const HalfSpacePoint& p) {
    const int n = p.dim();
    if (n < 3) throw InvalidArgument("conformal_weight_half: dimension must be >= 3");
    const double denom = (1.0 + p.y()) * (1.0 + p.y()) + norm_sq(p.x());
    return std::pow(2.0 / denom, 0.5 * (n - 2));
}

double conformal_weight_ball(const BallPoint& b) {
    const int n = b.dim();
    if (n < 3) throw InvalidArgument("conformal_weight_ball: dimension must be >= 3");
    return std::pow(2.0 / (1.0 - b.radius() * b.radius()), 0.5 * (n - 2));
}

Vec sphere_invert(std::span<const double> point) {
    const double rsq = norm_sq(point);
    if (!(rsq > 0.0)) throw InvalidArgument("sphere_invert: point must be nonzero");
    Vec out(point.size());
    for (std::size_t i = 0; i < point.size(); ++i) out[i] = point[i] / rsq;
    return out;
}

KelvinResult kelvin_invert(std::span<const double> omega_outside) {
    const int n = static_cast<int>(omega_outside.size());
    const double r = norm(omega_outside);
    if (!(r > 1.0))
        throw InvalidArgument("kelvin_invert: point must lie outside the closed unit ball");
    return KelvinResult{BallPoint(sphere_invert(omega_outside)),
                        std::pow(r, -static_cast<double>(n - 2))};
}

std::vector<Vec> mobius_jacobian(const HalfSpacePoint& p) {
    const Vec& x = p.x();
    const double y = p.y();
    const int n = p.dim();
    const double xsq = norm_sq(x);
    const double denom = (1.0 + y) * (1.0 + y) + xsq;
    const double d2 = denom * denom;

    std::vector<Vec> jac(n, Vec(n, 0.0));
    for (int i = 0; i + 1 < n; ++i) {
        for (int j = 0; j + 1 < n; ++j)
            jac[i][j] = (i == j ? 2.0 / denom : 0.0) - 4.0 * x[i] * x[j] / d2;
        jac[i][n - 1] = -4.0 * x[i] * (1.0 + y) / d2;
    }
    for (int j = 0; j + 1 < n; ++j) jac[n - 1][j] = -4.0 * x[j] * (1.0 + y) / d2;
    jac[n - 1][n - 1] = -2.0 * ((1.0 + y) * (1.0 + y) - xsq) / d2;
    return jac;
}

double mobius_conformal_factor(const HalfSpacePoint& p) {
    return 2.0 / ((1.0 + p.y()) * (1.0 + p.y()) + norm_sq(p.x()));
}

}  // namespace hsm
