#pragma once

#include <span>

#include "hsm/geometry.hpp"
#include "hsm/quadrature.hpp"
#include "hsm/special.hpp"

namespace hsm {

// Ordered pair of half-space points with the derived separation quantities.
class KernelPointPair {
  public:
    KernelPointPair(HalfSpacePoint p, HalfSpacePoint q);

    const HalfSpacePoint& first() const { return p_; }
    const HalfSpacePoint& second() const { return q_; }
    int dim() const { return p_.dim(); }

    double transverse_distance() const { return transverse_; }
    double distance() const { return distance_; }
    bool diagonal() const { return distance_ == 0.0; }

    // A = sqrt(y y') / |p - q|; large when both points sit deep relative to
    // their separation. Undefined on the diagonal.
    double depth_ratio() const;

    // Same pair with both heights shifted up by a; separations are unchanged.
    KernelPointPair translated(double a) const;

  private:
    HalfSpacePoint p_, q_;
    double transverse_;
    double distance_;
};

// Heat kernel of u_t = Delta u + u/(4 y^2) on the half-space, assembled in
// the overflow-safe factorization
//   (4 pi t)^{-(n+1)/2} sqrt(y y') e^{-(|x-x'|^2+(y-y')^2)/4t} * S(y y'/2t)
// where S is the exponentially scaled angular integral.
double heat_kernel(const KernelParams& params, const KernelPointPair& pair, double t);

// Green kernel of (-Delta - 1/(4y^2))^{-alpha/2}, evaluated through the
// F-factorization |p-q|^{alpha-n} * phi_prefactor * F(A). 0 < alpha < n+1.
double phi_kernel(const KernelParams& params, const KernelPointPair& pair);

// Riesz kernel of (-Delta)^{-alpha/2} on R^n: psi_prefactor * |p-q|^{alpha-n},
// 0 < alpha < n.
double psi_kernel(const KernelParams& params, const KernelPointPair& pair);

// phi_kernel with both heights shifted by a >= 0.
double phi_translated(const KernelParams& params, const KernelPointPair& pair, double a);

// Angular-quadrature route to phi_kernel, retained as an independent
// cross-check of the factorized evaluation.
double phi_kernel_angular(const KernelParams& params, const KernelPointPair& pair);

// (1/Gamma(alpha/2)) Int_0^inf t^{alpha/2-1} G(pair; t) dt. Log-substituted
// adaptive quadrature with endpoint-decay verification; reproduces phi_kernel.
IntegralResult phi_via_mellin(const KernelParams& params, const KernelPointPair& pair,
                              double tol = 1e-7);

// Raw span-based evaluators for grid assembly loops. Points are full
// coordinate vectors with the height as the last entry.
double heat_eval_raw(int n, std::span<const double> p, std::span<const double> q, double t);
double phi_eval_raw(int n, double alpha, double prefactor, std::span<const double> p,
                    std::span<const double> q);
double psi_eval_raw(int n, double alpha, double prefactor, std::span<const double> p,
                    std::span<const double> q);

}  // namespace hsm
