#include "hsm/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace hsm {

namespace {
constexpr double kPi = std::numbers::pi;

void require_off_diagonal(const KernelPointPair& pair, const char* who) {
    if (pair.diagonal()) {
        std::ostringstream os;
        os << who << ": kernel is singular on the diagonal";
        throw InvalidArgument(os.str());
    }
}

void require_same_dim(const KernelParams& params, const KernelPointPair& pair,
                      const char* who) {
    if (params.n != pair.dim()) {
        std::ostringstream os;
        os << who << ": parameter dimension " << params.n << " does not match pair dimension "
           << pair.dim();
        throw InvalidArgument(os.str());
    }
}

}  // namespace

KernelPointPair::KernelPointPair(HalfSpacePoint p, HalfSpacePoint q)
    : p_(std::move(p)), q_(std::move(q)) {
    if (p_.dim() != q_.dim())
        throw InvalidArgument("KernelPointPair: points must share a dimension");
    double tsq = 0.0;
    for (std::size_t i = 0; i < p_.x().size(); ++i) {
        const double d = p_.x()[i] - q_.x()[i];
        tsq += d * d;
    }
    transverse_ = std::sqrt(tsq);
    const double dy = p_.y() - q_.y();
    distance_ = std::sqrt(tsq + dy * dy);
}

double KernelPointPair::depth_ratio() const {
    if (diagonal())
        throw InvalidArgument("KernelPointPair: depth ratio undefined on the diagonal");
    return std::sqrt(p_.y() * q_.y()) / distance_;
}

KernelPointPair KernelPointPair::translated(double a) const {
    if (!(a >= 0.0)) throw InvalidArgument("KernelPointPair: shift must be >= 0");
    return KernelPointPair(HalfSpacePoint(p_.x(), p_.y() + a),
                           HalfSpacePoint(q_.x(), q_.y() + a));
}

double heat_eval_raw(int n, std::span<const double> p, std::span<const double> q, double t) {
    double rsq = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        const double d = p[i] - q[i];
        rsq += d * d;
    }
    const double y = p[n - 1], yp = q[n - 1];
    const double dy = y - yp;
    const double gauss = std::exp(-(rsq + dy * dy) / (4.0 * t));
    return std::pow(4.0 * kPi * t, -0.5 * (n + 1)) * std::sqrt(y * yp) * gauss *
           angular_exp_integral(y * yp / (2.0 * t));
}

double heat_kernel(const KernelParams& params, const KernelPointPair& pair, double t) {
    require_same_dim(params, pair, "heat_kernel");
    if (!(t > 0.0)) throw InvalidArgument("heat_kernel: t must be positive");
    const int n = params.n;
    Vec p(pair.first().x());
    p.push_back(pair.first().y());
    Vec q(pair.second().x());
    q.push_back(pair.second().y());
    return heat_eval_raw(n, p, q, t);
}

double phi_eval_raw(int n, double alpha, double prefactor, std::span<const double> p,
                    std::span<const double> q) {
    double dsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = p[i] - q[i];
        dsq += d * d;
    }
    const double dist = std::sqrt(dsq);
    const double a = std::sqrt(p[n - 1] * q[n - 1]) / dist;
    const double beta = 0.5 * (n + 1 - alpha);
    const double f = (beta == 1.0) ? 2.0 * kPi * a / std::sqrt(1.0 + 4.0 * a * a)
                                   : f_eval(a, beta, FMethod::Direct);
    return prefactor * std::pow(dist, alpha - n) * f;
}

double psi_eval_raw(int n, double alpha, double prefactor, std::span<const double> p,
                    std::span<const double> q) {
    double dsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = p[i] - q[i];
        dsq += d * d;
    }
    return prefactor * std::pow(dsq, 0.5 * (alpha - n));
}

double phi_kernel(const KernelParams& params, const KernelPointPair& pair) {
    require_same_dim(params, pair, "phi_kernel");
    require_off_diagonal(pair, "phi_kernel");
    const double pref = phi_prefactor(params.n, params.alpha);
    const double beta = params.beta();
    const double a = pair.depth_ratio();
    const double f = (beta == 1.0) ? f_eval(a, 1.0, FMethod::ClosedForm)
                                   : f_eval(a, beta, FMethod::Direct);
    return pref * std::pow(pair.distance(), params.alpha - params.n) * f;
}

double psi_kernel(const KernelParams& params, const KernelPointPair& pair) {
    require_same_dim(params, pair, "psi_kernel");
    require_off_diagonal(pair, "psi_kernel");
    const double pref = psi_prefactor(params.n, params.alpha);
    return pref * std::pow(pair.distance(), params.alpha - params.n);
}

double phi_translated(const KernelParams& params, const KernelPointPair& pair, double a) {
    require_same_dim(params, pair, "phi_translated");
    require_off_diagonal(pair, "phi_translated");
    if (!(a >= 0.0)) throw InvalidArgument("phi_translated: shift must be >= 0");
    const double pref = phi_prefactor(params.n, params.alpha);
    const double beta = params.beta();
    const double shifted =
        std::sqrt((pair.first().y() + a) * (pair.second().y() + a)) / pair.distance();
    const double f = (beta == 1.0) ? f_eval(shifted, 1.0, FMethod::ClosedForm)
                                   : f_eval(shifted, beta, FMethod::Direct);
    return pref * std::pow(pair.distance(), params.alpha - params.n) * f;
}

double phi_kernel_angular(const KernelParams& params, const KernelPointPair& pair) {
    require_same_dim(params, pair, "phi_kernel_angular");
    require_off_diagonal(pair, "phi_kernel_angular");
    const double pref = phi_prefactor(params.n, params.alpha);
    const double y = pair.first().y(), yp = pair.second().y();
    const double rsq = pair.transverse_distance() * pair.transverse_distance();
    const double beta = params.beta();
    const double integral = periodic_integrate([&](double phi) {
        return std::pow(rsq + y * y + yp * yp - 2.0 * y * yp * std::cos(phi), -beta);
    });
    return pref * std::sqrt(y * yp) * integral;
}

IntegralResult phi_via_mellin(const KernelParams& params, const KernelPointPair& pair,
                              double tol) {
    require_same_dim(params, pair, "phi_via_mellin");
    require_off_diagonal(pair, "phi_via_mellin");
    const int n = params.n;
    const double alpha = params.alpha;
    const double dsq = pair.distance() * pair.distance();

    Vec p(pair.first().x());
    p.push_back(pair.first().y());
    Vec q(pair.second().x());
    q.push_back(pair.second().y());

    // t = |p-q|^2 e^s turns the Mellin integral into
    //   d^alpha Int e^{s alpha/2} G(t(s)) ds / Gamma(alpha/2),
    // which decays superexponentially to the left and exponentially to the
    // right for alpha < n+1.
    auto integrand = [&](double s) {
        const double t = dsq * std::exp(s);
        return std::exp(0.5 * alpha * s) * heat_eval_raw(n, p, q, t);
    };
    double s_lo = std::log(1e-8), s_hi = std::log(1e8);
    double peak = 0.0;
    for (int k = 0; k <= 24; ++k)
        peak = std::max(peak, integrand(s_lo + (s_hi - s_lo) * k / 24.0));
    if (!(peak > 0.0)) throw NumericsError("phi_via_mellin: vanishing integrand");
    if (integrand(s_lo) > 1e-7 * peak || integrand(s_hi) > 1e-7 * peak) {
        s_lo = std::log(1e-14);
        s_hi = std::log(1e14);
        if (integrand(s_lo) > 1e-7 * peak || integrand(s_hi) > 1e-7 * peak)
            throw NumericsError("phi_via_mellin: integrand has not decayed at the cutoff");
    }
    auto integral = adaptive_integrate(integrand, s_lo, s_hi, tol * peak);
    const double scale = std::pow(pair.distance(), alpha) / gamma_fn(0.5 * alpha);
    return IntegralResult{scale * integral.value, scale * integral.error,
                          integral.evaluations};
}

}  // namespace hsm
