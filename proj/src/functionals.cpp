#include "hsm/functionals.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace hsm {

namespace {

constexpr int kMaxDim = 16;

double dist_to(std::span<const double> p, const Vec& center) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = p[i] - center[i];
        s += d * d;
    }
    return std::sqrt(s);
}

bool in_support(const TrialFunction& f, std::span<const double> p) {
    const double d = dist_to(p, f.support.center);
    return d <= f.support.radius && d >= f.support.inner_radius;
}

void check_dims(const TrialFunction& f, const TensorGrid& grid, Domain want,
                const char* who) {
    if (f.dim != grid.dim()) {
        std::ostringstream os;
        os << who << ": function dimension " << f.dim << " does not match grid dimension "
           << grid.dim();
        throw InvalidArgument(os.str());
    }
    if (f.domain != want) {
        std::ostringstream os;
        os << who << ": function lives on the wrong domain";
        throw InvalidArgument(os.str());
    }
    if (f.dim > kMaxDim) throw InvalidArgument("trial functions support dim <= 16");
}

void check_support_inside(const TrialFunction& f, const TensorGrid& grid, const char* who) {
    Vec lo, hi;
    grid.bounding_box(lo, hi);
    const double slack = 1e-9;
    for (int k = 0; k < grid.dim(); ++k) {
        const double c = f.support.center[k];
        const double span_k = hi[k] - lo[k];
        if (c - f.support.radius < lo[k] - slack * span_k ||
            c + f.support.radius > hi[k] + slack * span_k) {
            std::ostringstream os;
            os << who << ": support exceeds the grid box along axis " << k;
            throw InvalidArgument(os.str());
        }
    }
}

// Shared loop for forms Int [ |grad f|^2 - V(p) f^2 ].
template <class Potential>
double gradient_form(const TrialFunction& f, const TensorGrid& grid, Potential&& pot) {
    Accumulator acc;
    Vec grad(f.dim);
    grid.for_each([&](std::span<const double> p, double w) {
        if (!in_support(f, p)) return;
        const double val = f.value(p);
        f.gradient(p, grad);
        acc.add(w * (norm_sq(grad) - pot(p) * val * val));
    });
    return acc.value();
}

}  // namespace

TrialFunction smooth_bump(Domain domain, Vec center, double width, double amplitude) {
    if (!(width > 0.0)) throw InvalidArgument("smooth_bump: width must be positive");
    TrialFunction f;
    f.dim = static_cast<int>(center.size());
    f.domain = domain;
    f.support = Support{center, width, 0.0};
    const Vec c = std::move(center);
    const double w = width, a = amplitude;
    f.value = [c, w, a](std::span<const double> p) {
        const double rho = dist_to(p, c);
        if (rho >= w) return 0.0;
        const double s = rho / w;
        const double t = 1.0 - s * s;
        return a * t * t * t;
    };
    f.gradient = [c, w, a](std::span<const double> p, std::span<double> out) {
        const double rho = dist_to(p, c);
        if (rho >= w) {
            for (auto& o : out) o = 0.0;
            return;
        }
        const double s = rho / w;
        const double t = 1.0 - s * s;
        const double coef = -6.0 * a * t * t / (w * w);
        for (std::size_t i = 0; i < p.size(); ++i) out[i] = coef * (p[i] - c[i]);
    };
    return f;
}

TrialFunction smooth_bump_c4(Domain domain, Vec center, double width, double amplitude) {
    if (!(width > 0.0)) throw InvalidArgument("smooth_bump_c4: width must be positive");
    TrialFunction f;
    f.dim = static_cast<int>(center.size());
    f.domain = domain;
    f.support = Support{center, width, 0.0};
    const Vec c = std::move(center);
    const double w = width, a = amplitude;
    f.value = [c, w, a](std::span<const double> p) {
        const double s = dist_to(p, c) / w;
        if (s >= 1.0) return 0.0;
        const double t = 1.0 - s * s;
        return a * t * t * t * t * t;
    };
    f.gradient = [c, w, a](std::span<const double> p, std::span<double> out) {
        const double s = dist_to(p, c) / w;
        if (s >= 1.0) {
            for (auto& o : out) o = 0.0;
            return;
        }
        const double t = 1.0 - s * s;
        const double t2 = t * t;
        const double coef = -10.0 * a * t2 * t2 / (w * w);
        for (std::size_t i = 0; i < p.size(); ++i) out[i] = coef * (p[i] - c[i]);
    };
    return f;
}

TrialFunction bump_mixture(Domain domain, int dim, Rng& rng, const Vec& center_lo,
                           const Vec& center_hi, double width_min, double width_max,
                           int parts, bool nonnegative) {
    if (parts < 1) throw InvalidArgument("bump_mixture: need at least one part");
    std::vector<Vec> centers(parts, Vec(dim));
    std::vector<double> widths(parts), amps(parts);
    for (int k = 0; k < parts; ++k) {
        for (int i = 0; i < dim; ++i)
            centers[k][i] = rng.uniform(center_lo[i], center_hi[i]);
        widths[k] = rng.uniform(width_min, width_max);
        amps[k] = nonnegative ? rng.uniform(0.4, 1.0)
                              : rng.uniform(-1.0, 1.0);
        if (!nonnegative && std::abs(amps[k]) < 0.2) amps[k] = 0.2;
    }

    Vec mean(dim, 0.0);
    for (const auto& c : centers)
        for (int i = 0; i < dim; ++i) mean[i] += c[i] / parts;
    double radius = 0.0;
    for (int k = 0; k < parts; ++k)
        radius = std::max(radius, dist_to(centers[k], mean) + widths[k]);

    std::vector<TrialFunction> bumps;
    bumps.reserve(parts);
    for (int k = 0; k < parts; ++k)
        bumps.push_back(smooth_bump(domain, centers[k], widths[k], amps[k]));

    TrialFunction f;
    f.dim = dim;
    f.domain = domain;
    f.support = Support{mean, radius, 0.0};
    f.value = [bumps](std::span<const double> p) {
        double s = 0.0;
        for (const auto& b : bumps) s += b.value(p);
        return s;
    };
    f.gradient = [bumps, dim](std::span<const double> p, std::span<double> out) {
        for (auto& o : out) o = 0.0;
        std::array<double, kMaxDim> tmp;
        for (const auto& b : bumps) {
            b.gradient(p, std::span<double>(tmp.data(), dim));
            for (int i = 0; i < dim; ++i) out[i] += tmp[i];
        }
    };
    return f;
}

TrialFunction bubble_family(double epsilon, double center_height, double cutoff_radius,
                            int n) {
    if (n < 3) throw InvalidArgument("bubble_family: n must be >= 3");
    if (!(epsilon > 0.0)) throw InvalidArgument("bubble_family: epsilon must be positive");
    if (!(cutoff_radius > 0.0 && cutoff_radius < center_height))
        throw InvalidArgument("bubble_family: cutoff must satisfy 0 < R < h");

    Vec center(n, 0.0);
    center[n - 1] = center_height;
    const double eps = epsilon, R = cutoff_radius;
    const double pw = 0.5 * (n - 2);

    auto cutoff = [R](double rho, double& chi, double& dchi) {
        if (rho <= 0.5 * R) {
            chi = 1.0;
            dchi = 0.0;
        } else if (rho >= R) {
            chi = 0.0;
            dchi = 0.0;
        } else {
            const double u = 2.0 * rho / R - 1.0;
            const double t = 1.0 - u * u;
            chi = t * t * t;
            dchi = -12.0 * u * t * t / R;
        }
    };

    TrialFunction f;
    f.dim = n;
    f.domain = Domain::HalfSpace;
    f.support = Support{center, R, 0.0};
    f.value = [center, eps, R, pw, cutoff](std::span<const double> p) {
        const double rho = dist_to(p, center);
        if (rho >= R) return 0.0;
        double chi, dchi;
        cutoff(rho, chi, dchi);
        return std::pow(eps / (eps * eps + rho * rho), pw) * chi;
    };
    f.gradient = [center, eps, R, pw, n, cutoff](std::span<const double> p,
                                                 std::span<double> out) {
        const double rho = dist_to(p, center);
        if (rho >= R) {
            for (auto& o : out) o = 0.0;
            return;
        }
        double chi, dchi;
        cutoff(rho, chi, dchi);
        const double denom = eps * eps + rho * rho;
        const double u_val = std::pow(eps / denom, pw);
        // dU/drho / rho, finite at rho = 0
        const double du_over_rho = -(n - 2.0) * u_val / denom;
        double coef = du_over_rho * chi;
        if (rho > 0.0 && dchi != 0.0) coef += u_val * dchi / rho;
        for (int i = 0; i < n; ++i) out[i] = coef * (p[i] - center[i]);
    };
    return f;
}

TrialFunction pullback_halfspace_from_ball(const TrialFunction& g) {
    if (g.domain != Domain::Ball)
        throw InvalidArgument("pullback_halfspace_from_ball: expected a ball function");
    const int n = g.dim;
    if (n < 3 || n > kMaxDim)
        throw InvalidArgument("pullback_halfspace_from_ball: dimension out of range");
    if (norm(g.support.center) > 1e-12)
        throw InvalidArgument("pullback_halfspace_from_ball: support must be origin-centered");
    const double r0 = g.support.radius;
    if (!(r0 > 0.0 && r0 < 1.0))
        throw InvalidArgument("pullback_halfspace_from_ball: support radius must be in (0,1)");

    const double y_low = (1.0 - r0) / (1.0 + r0);
    const double y_high = (1.0 + r0) / (1.0 - r0);
    Vec center(n, 0.0);
    center[n - 1] = 0.5 * (y_low + y_high);

    TrialFunction f;
    f.dim = n;
    f.domain = Domain::HalfSpace;
    f.support = Support{center, 0.5 * (y_high - y_low), 0.0};
    f.value = [g, n](std::span<const double> p) {
        const double y = p[n - 1];
        if (y <= 0.0) return 0.0;
        double xsq = 0.0;
        for (int i = 0; i + 1 < n; ++i) xsq += p[i] * p[i];
        const double denom = (1.0 + y) * (1.0 + y) + xsq;
        std::array<double, kMaxDim> om;
        for (int i = 0; i + 1 < n; ++i) om[i] = 2.0 * p[i] / denom;
        om[n - 1] = (1.0 - xsq - y * y) / denom;
        const double gv = g.value(std::span<const double>(om.data(), n));
        if (gv == 0.0) return 0.0;
        return std::pow(2.0 / denom, 0.5 * (n - 2)) * gv;
    };
    f.gradient = [g, n](std::span<const double> p, std::span<double> out) {
        const double y = p[n - 1];
        double xsq = 0.0;
        for (int i = 0; i + 1 < n; ++i) xsq += p[i] * p[i];
        const double denom = (1.0 + y) * (1.0 + y) + xsq;
        const double d2 = denom * denom;
        std::array<double, kMaxDim> om, gg;
        for (int i = 0; i + 1 < n; ++i) om[i] = 2.0 * p[i] / denom;
        om[n - 1] = (1.0 - xsq - y * y) / denom;
        const std::span<const double> om_span(om.data(), n);
        const double gval = g.value(om_span);
        g.gradient(om_span, std::span<double>(gg.data(), n));

        const double w = std::pow(2.0 / denom, 0.5 * (n - 2));
        // sum over transverse components of x_i * (grad g)_i
        double s1 = 0.0;
        for (int i = 0; i + 1 < n; ++i) s1 += p[i] * gg[i];

        for (int j = 0; j + 1 < n; ++j) {
            const double jt = 2.0 * gg[j] / denom - 4.0 * p[j] * s1 / d2 -
                              4.0 * p[j] * (1.0 + y) * gg[n - 1] / d2;
            const double dw = -(n - 2.0) * (w / denom) * p[j];
            out[j] = dw * gval + w * jt;
        }
        const double jt_y = -4.0 * (1.0 + y) * s1 / d2 -
                            2.0 * ((1.0 + y) * (1.0 + y) - xsq) * gg[n - 1] / d2;
        const double dw_y = -(n - 2.0) * (w / denom) * (1.0 + y);
        out[n - 1] = dw_y * gval + w * jt_y;
    };
    return f;
}

TrialFunction ball_weighted_from_hyperbolic(const TrialFunction& k) {
    if (k.domain != Domain::Ball)
        throw InvalidArgument("ball_weighted_from_hyperbolic: expected a ball function");
    const int n = k.dim;
    if (n < 3) throw InvalidArgument("ball_weighted_from_hyperbolic: need n >= 3");

    TrialFunction g;
    g.dim = n;
    g.domain = Domain::Ball;
    g.support = k.support;
    g.value = [k, n](std::span<const double> p) {
        const double rsq = norm_sq(p);
        if (rsq >= 1.0) return 0.0;
        const double kv = k.value(p);
        if (kv == 0.0) return 0.0;
        return std::pow(2.0 / (1.0 - rsq), 0.5 * (n - 2)) * kv;
    };
    g.gradient = [k, n](std::span<const double> p, std::span<double> out) {
        const double rsq = norm_sq(p);
        const double omr = 1.0 - rsq;
        const double w = std::pow(2.0 / omr, 0.5 * (n - 2));
        const double kv = k.value(p);
        std::array<double, kMaxDim> kg;
        k.gradient(p, std::span<double>(kg.data(), n));
        for (int i = 0; i < n; ++i)
            out[i] = w * ((n - 2.0) * p[i] / omr * kv + kg[i]);
    };
    return g;
}

TrialFunction kelvin_pullback(const TrialFunction& exterior) {
    const int n = exterior.dim;
    if (n < 3) throw InvalidArgument("kelvin_pullback: need n >= 3");
    if (norm(exterior.support.center) > 1e-12)
        throw InvalidArgument("kelvin_pullback: support must be origin-centered");
    if (!(exterior.support.inner_radius >= 1.0))
        throw InvalidArgument("kelvin_pullback: function must be supported outside the unit ball");

    TrialFunction g;
    g.dim = n;
    g.domain = Domain::Ball;
    g.support = Support{Vec(n, 0.0), 1.0 / exterior.support.inner_radius,
                        1.0 / exterior.support.radius};
    g.value = [exterior, n](std::span<const double> z) {
        const double rsq = norm_sq(z);
        if (rsq <= 0.0) return 0.0;
        std::array<double, kMaxDim> inv;
        for (int i = 0; i < n; ++i) inv[i] = z[i] / rsq;
        const double ev = exterior.value(std::span<const double>(inv.data(), n));
        if (ev == 0.0) return 0.0;
        return std::pow(rsq, 0.5 * (2 - n)) * ev;
    };
    g.gradient = [exterior, n](std::span<const double> z, std::span<double> out) {
        const double rsq = norm_sq(z);
        if (rsq <= 0.0) {
            for (auto& o : out) o = 0.0;
            return;
        }
        std::array<double, kMaxDim> inv, eg;
        for (int i = 0; i < n; ++i) inv[i] = z[i] / rsq;
        const std::span<const double> inv_span(inv.data(), n);
        const double ev = exterior.value(inv_span);
        exterior.gradient(inv_span, std::span<double>(eg.data(), n));
        const double w = std::pow(rsq, 0.5 * (2 - n));
        double zg = 0.0;
        for (int i = 0; i < n; ++i) zg += z[i] * eg[i];
        for (int i = 0; i < n; ++i) {
            const double jt = eg[i] / rsq - 2.0 * z[i] * zg / (rsq * rsq);
            out[i] = (2.0 - n) * std::pow(rsq, -0.5 * n) * z[i] * ev + w * jt;
        }
    };
    return g;
}

double gradient_fd_max_error(const TrialFunction& f, Rng& rng, int samples, double step) {
    const int d = f.dim;
    Vec p(d), an(d), fd(d), shift(d);
    double worst_diff = 0.0, grad_scale = 0.0;
    for (int s = 0; s < samples; ++s) {
        // Uniform point in the support box, biased to the interior.
        for (int i = 0; i < d; ++i)
            p[i] = f.support.center[i] + 0.9 * f.support.radius * rng.uniform(-1.0, 1.0);
        if (f.domain == Domain::HalfSpace && p[d - 1] < 2.0 * step) continue;
        if (f.domain == Domain::Ball && norm(p) > 1.0 - 2.0 * step) continue;
        f.gradient(p, an);
        for (int i = 0; i < d; ++i) {
            shift = p;
            shift[i] = p[i] + step;
            const double hi = f.value(shift);
            shift[i] = p[i] - step;
            const double lo = f.value(shift);
            fd[i] = (hi - lo) / (2.0 * step);
        }
        double diff = 0.0;
        for (int i = 0; i < d; ++i) diff += (fd[i] - an[i]) * (fd[i] - an[i]);
        worst_diff = std::max(worst_diff, std::sqrt(diff));
        grad_scale = std::max(grad_scale, norm(an));
    }
    return worst_diff / std::max(grad_scale, 1e-300);
}

double hardy_form(const TrialFunction& f, const TensorGrid& grid) {
    check_dims(f, grid, Domain::HalfSpace, "hardy_form");
    if (f.dim < 3) throw InvalidArgument("hardy_form: n must be >= 3");
    check_support_inside(f, grid, "hardy_form");
    const int d = f.dim;
    return gradient_form(f, grid, [d](std::span<const double> p) {
        const double y = p[d - 1];
        return 1.0 / (4.0 * y * y);
    });
}

double ball_form(const TrialFunction& g, const TensorGrid& grid) {
    check_dims(g, grid, Domain::Ball, "ball_form");
    if (g.dim < 3) throw InvalidArgument("ball_form: n must be >= 3");
    check_support_inside(g, grid, "ball_form");
    return gradient_form(g, grid, [](std::span<const double> p) {
        const double omr = 1.0 - norm_sq(p);
        return 1.0 / (omr * omr);
    });
}

double ball_form_distance_weight(const TrialFunction& g, const TensorGrid& grid) {
    check_dims(g, grid, Domain::Ball, "ball_form_distance_weight");
    if (g.dim < 3) throw InvalidArgument("ball_form_distance_weight: n must be >= 3");
    check_support_inside(g, grid, "ball_form_distance_weight");
    return gradient_form(g, grid, [](std::span<const double> p) {
        const double omr = 1.0 - norm(p);
        return 1.0 / (4.0 * omr * omr);
    });
}

HyperbolicForm hyperbolic_form(const TrialFunction& k, const TensorGrid& grid) {
    check_dims(k, grid, Domain::Ball, "hyperbolic_form");
    if (k.dim < 3) throw InvalidArgument("hyperbolic_form: n must be >= 3");
    check_support_inside(k, grid, "hyperbolic_form");
    const int n = k.dim;
    const double spectral = 0.25 * (n - 1.0) * (n - 1.0);
    Accumulator form, mass;
    Vec grad(n);
    grid.for_each([&](std::span<const double> p, double w) {
        if (!in_support(k, p)) return;
        const double val = k.value(p);
        k.gradient(p, grad);
        const double conf = 0.5 * (1.0 - norm_sq(p));
        const double vol = std::pow(conf, -n);
        form.add(w * vol * (conf * conf * norm_sq(grad) - spectral * val * val));
        mass.add(w * vol * val * val);
    });
    return HyperbolicForm{form.value(), mass.value()};
}

double lp_norm(const TrialFunction& f, double p, const TensorGrid& grid) {
    if (!(p > 1.0)) throw InvalidArgument("lp_norm: p must exceed 1");
    if (f.dim != grid.dim()) throw InvalidArgument("lp_norm: dimension mismatch");
    Accumulator acc;
    grid.for_each([&](std::span<const double> pt, double w) {
        if (!in_support(f, pt)) return;
        const double v = std::abs(f.value(pt));
        if (v > 0.0) acc.add(w * std::pow(v, p));
    });
    return std::pow(acc.value(), 1.0 / p);
}

namespace {

QuotientResult quotient_of(double form, double norm, double form_c, double norm_c,
                           bool have_coarse) {
    if (!(norm > 0.0)) throw InvalidArgument("quotient: trial function is zero on the grid");
    QuotientResult q;
    q.form = form;
    q.norm = norm;
    q.quotient = form / (norm * norm);
    if (have_coarse && norm_c > 0.0)
        q.err_estimate = std::abs(q.quotient - form_c / (norm_c * norm_c));
    else
        q.err_estimate = 1e-9 * std::abs(q.quotient);
    return q;
}

}  // namespace

QuotientResult rayleigh_quotient(const TrialFunction& f, const TensorGrid& grid,
                                 const TensorGrid* coarse) {
    const int n = f.dim;
    if (n < 3) throw InvalidArgument("rayleigh_quotient: n must be >= 3");
    const double p_crit = 2.0 * n / (n - 2.0);
    const double form = hardy_form(f, grid);
    const double nrm = lp_norm(f, p_crit, grid);
    double form_c = 0.0, nrm_c = 0.0;
    if (coarse) {
        form_c = hardy_form(f, *coarse);
        nrm_c = lp_norm(f, p_crit, *coarse);
    }
    return quotient_of(form, nrm, form_c, nrm_c, coarse != nullptr);
}

namespace {

QuotientResult hls_quotient_impl(const TrialFunction& f, const KernelParams& params,
                                 const TensorGrid& grid, const TensorGrid* coarse,
                                 bool riesz) {
    const int n = params.n;
    const double alpha = params.alpha;
    if (params.regime() != Regime::Hls)
        throw InvalidArgument("hls_quotient: requires n-1 <= alpha < n");
    if (f.dim != n) throw InvalidArgument("hls_quotient: dimension mismatch");

    const double pref = riesz ? psi_prefactor(n, alpha) : phi_prefactor(n, alpha);
    SingularKernel kernel;
    kernel.order = n - alpha;
    kernel.diag_coeff = psi_prefactor(n, alpha);
    if (riesz) {
        kernel.eval = [n, alpha, pref](std::span<const double> a, std::span<const double> b) {
            return psi_eval_raw(n, alpha, pref, a, b);
        };
    } else {
        kernel.eval = [n, alpha, pref](std::span<const double> a, std::span<const double> b) {
            return phi_eval_raw(n, alpha, pref, a, b);
        };
    }

    const double p_crit = 2.0 * n / (n + alpha);
    auto values = sample_on_grid(f, grid);
    const auto qf = quadratic_form_singular(kernel, values, grid);
    const double nrm = lp_norm(f, p_crit, grid);

    double form_c = 0.0, nrm_c = 0.0;
    if (coarse) {
        auto values_c = sample_on_grid(f, *coarse);
        form_c = quadratic_form_singular(kernel, values_c, *coarse).value;
        nrm_c = lp_norm(f, p_crit, *coarse);
    }
    auto q = quotient_of(qf.value, nrm, form_c, nrm_c, coarse != nullptr);
    // fold the diagonal-correction scale into the estimate
    q.err_estimate += qf.error / (nrm * nrm);
    return q;
}

}  // namespace

QuotientResult hls_quotient(const TrialFunction& f, const KernelParams& params,
                            const TensorGrid& grid, const TensorGrid* coarse) {
    return hls_quotient_impl(f, params, grid, coarse, false);
}

QuotientResult hls_quotient_riesz(const TrialFunction& f, const KernelParams& params,
                                  const TensorGrid& grid, const TensorGrid* coarse) {
    return hls_quotient_impl(f, params, grid, coarse, true);
}

double grid_l2_norm(std::span<const double> values, const TensorGrid& grid) {
    if (values.size() != grid.size()) throw InvalidArgument("grid_l2_norm: size mismatch");
    Accumulator acc;
    std::size_t i = 0;
    grid.for_each([&](std::span<const double>, double w) {
        acc.add(w * values[i] * values[i]);
        ++i;
    });
    return std::sqrt(acc.value());
}

double grid_inner(std::span<const double> a, std::span<const double> b,
                  const TensorGrid& grid) {
    if (a.size() != grid.size() || b.size() != grid.size())
        throw InvalidArgument("grid_inner: size mismatch");
    Accumulator acc;
    std::size_t i = 0;
    grid.for_each([&](std::span<const double>, double w) {
        acc.add(w * a[i] * b[i]);
        ++i;
    });
    return acc.value();
}

std::vector<double> heat_apply(const KernelParams& params, const TensorGrid& grid,
                               std::span<const double> values, double t) {
    if (values.size() != grid.size()) throw InvalidArgument("heat_apply: size mismatch");
    if (!(t > 0.0)) throw InvalidArgument("heat_apply: t must be positive");
    if (grid.dim() != params.n) throw InvalidArgument("heat_apply: dimension mismatch");
    std::vector<double> pts, w;
    grid.materialize(pts, w);
    const std::size_t n_pts = w.size();
    const int d = grid.dim();
    const double factor = std::pow(4.0 * std::numbers::pi * t, -0.5 * (d + 1));
    const double inv4t = 1.0 / (4.0 * t);
    auto kernel = [&](const double* a, const double* b) {
        double dsq = 0.0;
        for (int k = 0; k < d; ++k) {
            const double diff = a[k] - b[k];
            dsq += diff * diff;
        }
        const double y = a[d - 1], yp = b[d - 1];
        return factor * std::sqrt(y * yp) * std::exp(-dsq * inv4t) *
               angular_exp_integral(y * yp * 2.0 * inv4t);
    };
    std::vector<double> out(n_pts, 0.0);
    for (std::size_t i = 0; i < n_pts; ++i) {
        const double* pi = &pts[i * d];
        out[i] += w[i] * kernel(pi, pi) * values[i];
        for (std::size_t j = i + 1; j < n_pts; ++j) {
            const double* pj = &pts[j * d];
            const double gij = kernel(pi, pj);
            out[i] += w[j] * gij * values[j];
            out[j] += w[i] * gij * values[i];
        }
    }
    return out;
}

std::vector<double> sample_on_grid(const TrialFunction& f, const TensorGrid& grid) {
    if (f.dim != grid.dim()) throw InvalidArgument("sample_on_grid: dimension mismatch");
    std::vector<double> values;
    values.reserve(grid.size());
    grid.for_each([&](std::span<const double> p, double) {
        values.push_back(in_support(f, p) ? f.value(p) : 0.0);
    });
    return values;
}

std::vector<double> generator_limit(const KernelParams& params, const TrialFunction& f,
                                    std::span<const double> t_sequence,
                                    const TensorGrid& grid) {
    check_dims(f, grid, Domain::HalfSpace, "generator_limit");
    check_support_inside(f, grid, "generator_limit");
    for (std::size_t i = 0; i + 1 < t_sequence.size(); ++i)
        if (!(t_sequence[i] > t_sequence[i + 1]))
            throw InvalidArgument("generator_limit: t sequence must decrease");
    auto values = sample_on_grid(f, grid);
    const double norm2 = grid_inner(values, values, grid);
    std::vector<double> out;
    out.reserve(t_sequence.size());
    for (double t : t_sequence) {
        if (!(t > 0.0)) throw InvalidArgument("generator_limit: t must be positive");
        auto gt = heat_apply(params, grid, values, t);
        out.push_back((norm2 - grid_inner(values, gt, grid)) / t);
    }
    return out;
}

std::vector<SweepRow> bubble_sweep(const SweepConfig& config) {
    if (config.steps < 1) throw InvalidArgument("bubble_sweep: steps must be >= 1");
    if (!(config.eps_start > 0.0 && config.eps_end > 0.0))
        throw InvalidArgument("bubble_sweep: epsilon bounds must be positive");
    const int n = config.n;
    const double pad = 1.02;
    const double half = pad * config.radius;
    if (!(config.height - half > 0.0))
        throw InvalidArgument("bubble_sweep: window dips below the boundary");

    Vec center(n, 0.0);
    center[n - 1] = config.height;
    const Vec widths(n, half);
    const auto fine = halfspace_window_grid(n, center, widths, config.grid_m, config.grading);
    const auto coarse =
        halfspace_window_grid(n, center, widths, std::max(8, config.grid_m / 2), config.grading);

    std::vector<SweepRow> rows;
    rows.reserve(config.steps);
    for (int k = 0; k < config.steps; ++k) {
        const double frac = (config.steps == 1)
                                ? 0.0
                                : static_cast<double>(k) / (config.steps - 1);
        const double eps = config.eps_start * std::pow(config.eps_end / config.eps_start, frac);
        const auto f = bubble_family(eps, config.height, config.radius, n);
        const auto q = rayleigh_quotient(f, fine, &coarse);
        rows.push_back(SweepRow{eps, q.form, q.norm, q.quotient, q.err_estimate});
    }
    return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "epsilon,form,norm,quotient,err_estimate\n";
    os.precision(17);
    for (const auto& r : rows)
        os << r.epsilon << "," << r.form << "," << r.norm << "," << r.quotient << ","
           << r.err_estimate << "\n";
    write_file_atomic(path, os.str());
}

}  // namespace hsm
