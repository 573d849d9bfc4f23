#include "hsm/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hsm/quadrature.hpp"

namespace hsm {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficients).
constexpr double kLanczosG = 4.7421875;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4,
    0.15808870322491248884e-3,  -0.21026444172410488319e-3,
    0.21743961811521264320e-3,  -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};

double lanczos_log_gamma(double x) {
    double series = kLanczos[0];
    for (int k = 1; k < 15; ++k) series += kLanczos[k] / (x - 1.0 + k);
    const double t = x + kLanczosG - 0.5;
    return 0.5 * std::log(2.0 * kPi) + (x - 0.5) * std::log(t) - t + std::log(series);
}

}  // namespace

KernelParams::KernelParams(int n_, double alpha_) : n(n_), alpha(alpha_) {
    if (n < 2) throw InvalidArgument("KernelParams: dimension must be >= 2");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw InvalidArgument("KernelParams: alpha must be positive and finite");
    if (alpha > n + 1)
        throw InvalidArgument("KernelParams: alpha beyond n+1 is not classified");
}

Regime KernelParams::regime() const {
    if (alpha >= n) return Regime::Unbounded;
    if (alpha >= n - 1) return Regime::Hls;
    return Regime::Subcritical;
}

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::Subcritical: return "subcritical";
        case Regime::Hls: return "hls";
        case Regime::Unbounded: return "unbounded";
    }
    return "unknown";
}

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw InvalidArgument("log_gamma: argument must be positive");
    // Shift small arguments up; the Lanczos series is most accurate for x >= 1.
    if (x < 1.0) return lanczos_log_gamma(x + 1.0) - std::log(x);
    return lanczos_log_gamma(x);
}

double gamma_fn(double x) { return std::exp(log_gamma(x)); }

double angular_exp_integral(double c) {
    if (!(c >= 0.0)) throw InvalidArgument("angular_exp_integral: c must be >= 0");
    if (c < 25.0) {
        // 2 pi e^{-c} I0(c), I0 by its power series.
        double term = 1.0, sum = 1.0;
        const double q = 0.25 * c * c;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < 1e-18 * sum) break;
        }
        return 2.0 * kPi * std::exp(-c) * sum;
    }
    // Asymptotic expansion of the scaled I0; terms decrease well past the
    // target accuracy for c >= 25.
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = term * odd * odd / (8.0 * k * c);
        if (next >= term) break;
        term = next;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return std::sqrt(2.0 * kPi / c) * sum;
}

namespace {

double f_integrand(double A, double beta, double phi) {
    const double s = std::sin(0.5 * phi);
    return A * std::pow(1.0 + 4.0 * A * A * s * s, -beta);
}

double f_direct(double A, double beta) {
    if (A <= 256.0) {
        auto st = periodic_integrate_status(
            [&](double phi) { return f_integrand(A, beta, phi); }, 256, 1e-12);
        if (st.converged) return st.value;
    }
    // Large A: the integrand peaks on a 1/A scale, so integrate the stretched
    // form 2 * Int_0^{pi A} (1 + 4 A^2 sin^2(theta/2A))^{-beta} dtheta instead.
    auto r = adaptive_integrate(
        [&](double theta) {
            const double s = std::sin(0.5 * theta / A);
            return std::pow(1.0 + 4.0 * A * A * s * s, -beta);
        },
        0.0, kPi * A, 1e-11);
    return 2.0 * r.value;
}

double f_subordination(double A, double beta) {
    // Two exact substitutions remove both the t^{-beta} endpoint singularity
    // and the infinite tail.
    auto g = [&](double t) {
        return A / std::sqrt((1.0 + t) * (1.0 + t) + 4.0 * (1.0 + t) * A * A);
    };
    const double p1 = 1.0 / (1.0 - beta);
    auto i1 = adaptive_integrate(
        [&](double s) { return g(std::pow(s, p1)); }, 0.0, 1.0, 1e-12);
    auto i2 = adaptive_integrate(
        [&](double w) {
            const double u = std::pow(w, 1.0 / beta);
            return 1.0 / std::sqrt((1.0 + u) * (1.0 + u + 4.0 * A * A * u));
        },
        0.0, 1.0, 1e-12);
    const double part1 = p1 * i1.value;
    const double part2 = (A / beta) * i2.value;
    return 2.0 * std::sin(kPi * beta) * (part1 + part2);
}

}  // namespace

double f_eval(double A, double beta, FMethod method) {
    if (!(A >= 0.0) || !std::isfinite(A))
        throw InvalidArgument("f_eval: A must be >= 0 and finite");
    if (!(beta >= 0.0 && beta <= 1.0))
        throw InvalidArgument("f_eval: beta must lie in [0, 1]");
    if (A == 0.0) return 0.0;
    switch (method) {
        case FMethod::ClosedForm:
            if (beta != 1.0)
                throw InvalidArgument("f_eval: closed form requires beta = 1");
            return 2.0 * kPi * A / std::sqrt(1.0 + 4.0 * A * A);
        case FMethod::Subordination:
            if (!(beta > 0.5 && beta < 1.0))
                throw InvalidArgument("f_eval: subordination requires 1/2 < beta < 1");
            return f_subordination(A, beta);
        case FMethod::Direct:
            return f_direct(A, beta);
    }
    throw InvalidArgument("f_eval: unknown method");
}

std::optional<double> f_limit(double beta) {
    if (!(beta >= 0.0 && beta <= 1.0))
        throw InvalidArgument("f_limit: beta must lie in [0, 1]");
    if (beta <= 0.5) return std::nullopt;
    return std::sqrt(kPi) * std::exp(log_gamma(beta - 0.5) - log_gamma(beta));
}

double sobolev_constant(int n) {
    if (n < 3) throw InvalidArgument("sobolev_constant: n must be >= 3");
    const double sphere = 2.0 * std::pow(kPi, 0.5 * (n + 1)) / gamma_fn(0.5 * (n + 1));
    return 0.25 * n * (n - 2.0) * std::pow(sphere, 2.0 / n);
}

double hls_constant(int n, double alpha) {
    if (n < 2) throw InvalidArgument("hls_constant: n must be >= 2");
    if (!(alpha > 0.0 && alpha < n))
        throw InvalidArgument("hls_constant: alpha must lie in (0, n)");
    const double log_c = 0.5 * (n - alpha) * std::log(kPi) + log_gamma(0.5 * alpha) -
                         log_gamma(0.5 * (n + alpha)) -
                         (alpha / n) * (log_gamma(0.5 * n) - log_gamma(static_cast<double>(n)));
    return std::exp(log_c);
}

double phi_prefactor(int n, double alpha) {
    if (n < 2) throw InvalidArgument("phi_prefactor: n must be >= 2");
    if (!(alpha > 0.0 && alpha < n + 1)) {
        std::ostringstream os;
        os << "phi_prefactor: alpha = " << alpha << " outside (0, " << n + 1
           << ") hits the Gamma pole region";
        throw InvalidArgument(os.str());
    }
    return std::exp(-alpha * std::log(2.0) - 0.5 * (n + 1) * std::log(kPi) +
                    log_gamma(0.5 * (n + 1 - alpha)) - log_gamma(0.5 * alpha));
}

double psi_prefactor(int n, double alpha) {
    if (n < 2) throw InvalidArgument("psi_prefactor: n must be >= 2");
    if (!(alpha > 0.0 && alpha < n)) {
        std::ostringstream os;
        os << "psi_prefactor: alpha = " << alpha << " outside (0, " << n
           << ") hits the Gamma pole region";
        throw InvalidArgument(os.str());
    }
    return std::exp(-alpha * std::log(2.0) - 0.5 * n * std::log(kPi) +
                    log_gamma(0.5 * (n - alpha)) - log_gamma(0.5 * alpha));
}

KernelPrefactors kernel_prefactors(const KernelParams& params) {
    return KernelPrefactors{phi_prefactor(params.n, params.alpha),
                            psi_prefactor(params.n, params.alpha)};
}

double unit_ball_volume(int n) {
    return std::pow(kPi, 0.5 * n) / gamma_fn(0.5 * n + 1.0);
}

double unit_sphere_surface(int n) {
    return 2.0 * std::pow(kPi, 0.5 * n) / gamma_fn(0.5 * n);
}

}  // namespace hsm
