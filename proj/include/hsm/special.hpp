#pragma once

#include <optional>
#include <string>

#include "hsm/common.hpp"

namespace hsm {

// Boundedness regime of (-Delta - 1/4y^2)^{-alpha/2} as a map on L^p of the
// half-space, classified by where alpha sits relative to the dimension.
enum class Regime { Subcritical, Hls, Unbounded };

struct KernelParams {
    int n;
    double alpha;

    KernelParams(int n_, double alpha_);

    // beta is always derived, never stored.
    double beta() const { return (n + 1 - alpha) / 2.0; }
    Regime regime() const;
};

std::string regime_name(Regime r);

// log Gamma(x) for x > 0, Lanczos rational approximation with a recurrence
// shift for small arguments. Absolute error below 1e-13 on [1e-3, 50].
double log_gamma(double x);
double gamma_fn(double x);

// Exponentially scaled angular integral e^{-c} * Int_0^{2pi} e^{c cos phi} dphi
// = 2 pi e^{-c} I0(c). Power series for small c, asymptotic expansion for
// large c; relative error below 1e-12 for all c >= 0.
double angular_exp_integral(double c);

enum class FMethod { Direct, ClosedForm, Subordination };

// F(A) = Int_{-pi}^{pi} A / (1 + 2 A^2 (1 - cos phi))^beta dphi, beta in [0,1].
//   Direct       - quadrature of the definition (any beta)
//   ClosedForm   - 2 pi A / sqrt(1 + 4 A^2), requires beta == 1
//   Subordination- resolvent representation, requires 1/2 < beta < 1
double f_eval(double A, double beta, FMethod method = FMethod::Direct);

// Limit of F(A) as A -> infinity: sqrt(pi) Gamma(beta - 1/2) / Gamma(beta)
// for beta > 1/2; nullopt flags divergence for beta <= 1/2. The flag is an
// explicit tagged value so suites can tell "diverges" from overflow bugs.
std::optional<double> f_limit(double beta);

// Sharp Sobolev constant S_n = (n(n-2)/4) |S^n|^{2/n},
// |S^n| = 2 pi^{(n+1)/2} / Gamma((n+1)/2), n >= 3.
double sobolev_constant(int n);

// Lieb's sharp Hardy-Littlewood-Sobolev constant
// C(n,alpha) = pi^{(n-alpha)/2} Gamma(alpha/2)/Gamma((n+alpha)/2)
//              * [Gamma(n/2)/Gamma(n)]^{-alpha/n},  0 < alpha < n.
double hls_constant(int n, double alpha);

// Green-kernel prefactors:
//   phi: 2^{-alpha} pi^{-(n+1)/2} Gamma((n+1-alpha)/2)/Gamma(alpha/2),  0 < alpha < n+1
//   psi: 2^{-alpha} pi^{-n/2}     Gamma((n-alpha)/2)  /Gamma(alpha/2),  0 < alpha < n
// Gamma poles (alpha = n+1 resp. alpha = n) are rejected.
double phi_prefactor(int n, double alpha);
double psi_prefactor(int n, double alpha);

struct KernelPrefactors {
    double phi;
    double psi;
};
KernelPrefactors kernel_prefactors(const KernelParams& params);

// Volume of the unit n-ball and surface of the unit (n-1)-sphere in R^n.
double unit_ball_volume(int n);
double unit_sphere_surface(int n);

}  // namespace hsm
