#include "hsm/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "hsm/special.hpp"

namespace hsm {

namespace {
constexpr double kPi = std::numbers::pi;
}

QuadratureRule periodic_rule(int n) {
    if (n < 8 || (n & (n - 1)) != 0)
        throw InvalidArgument("periodic_rule: node count must be a power of two, >= 8");
    QuadratureRule rule;
    rule.domain = Domain::PeriodicAngle;
    rule.nodes.resize(n);
    rule.weights.assign(n, 2.0 * kPi / n);
    for (int j = 0; j < n; ++j) rule.nodes[j] = -kPi + 2.0 * kPi * j / n;
    return rule;
}

PeriodicStatus periodic_integrate_status(const std::function<double(double)>& f,
                                         int n_start, double tol, int n_max) {
    if (n_start < 8 || (n_start & (n_start - 1)) != 0)
        throw InvalidArgument("periodic_integrate: start node count must be a power of two, >= 8");
    int n = n_start;
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += f(-kPi + 2.0 * kPi * j / n);
    double value = 2.0 * kPi * sum / n;

    PeriodicStatus st;
    st.value = value;
    st.nodes = n;
    while (n < n_max) {
        // New nodes sit halfway between the old ones, so the old sum is reused.
        double extra = 0.0;
        for (int j = 0; j < n; ++j) extra += f(-kPi + 2.0 * kPi * (j + 0.5) / n);
        sum += extra;
        n *= 2;
        const double next = 2.0 * kPi * sum / n;
        st.previous = st.value;
        st.last_delta = std::abs(next - st.value);
        st.value = next;
        st.nodes = n;
        if (st.last_delta <= tol * std::max(1.0, std::abs(next))) {
            st.converged = true;
            return st;
        }
    }
    return st;
}

double periodic_integrate(const std::function<double(double)>& f, int n_start,
                          double tol, int n_max) {
    auto st = periodic_integrate_status(f, n_start, tol, n_max);
    if (!st.converged) {
        std::ostringstream os;
        os << "periodic_integrate: no convergence at " << st.nodes
           << " nodes; last two values " << st.previous << ", " << st.value;
        throw NumericsError(os.str());
    }
    return st.value;
}

namespace {

// Gauss-Kronrod 7-15 nodes/weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
};

struct SegmentWorse {
    bool operator()(const Segment& lhs, const Segment& rhs) const {
        if (lhs.error != rhs.error) return lhs.error < rhs.error;
        return lhs.a < rhs.a;
    }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    Segment s{a, b, resk * h, std::abs((resk - resg) * h)};
    if (!std::isfinite(s.value))
        throw NumericsError("adaptive_integrate: integrand produced a non-finite value");
    return s;
}

IntegralResult adaptive_core(const std::function<double(double)>& f, double a, double b,
                             double tol, long max_evaluations) {
    long evals = 15;
    std::priority_queue<Segment, std::vector<Segment>, SegmentWorse> active;
    active.push(gk15(f, a, b));
    double value = active.top().value;
    double error = active.top().error;
    double frozen_value = 0.0, frozen_error = 0.0;

    auto target = [&](double v) { return std::max(tol, tol * std::abs(v)); };

    while (error > target(value + frozen_value)) {
        if (active.empty()) break;
        Segment worst = active.top();
        active.pop();
        const double width = worst.b - worst.a;
        if (width < 1e-14 * (1.0 + std::abs(worst.a) + std::abs(worst.b))) {
            // Cannot be refined further in double precision.
            frozen_value += worst.value;
            frozen_error += worst.error;
            value -= worst.value;
            error -= worst.error;
            continue;
        }
        if (evals + 30 > max_evaluations) {
            std::ostringstream os;
            os << "adaptive_integrate: evaluation budget (" << max_evaluations
               << ") exhausted, error estimate " << error + frozen_error;
            throw NumericsError(os.str());
        }
        const double mid = 0.5 * (worst.a + worst.b);
        Segment left = gk15(f, worst.a, mid);
        Segment right = gk15(f, mid, worst.b);
        evals += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        active.push(left);
        active.push(right);
    }
    return IntegralResult{value + frozen_value, std::max(0.0, error) + frozen_error, evals};
}

}  // namespace

IntegralResult adaptive_integrate(const std::function<double(double)>& f, double a,
                                  double b, double tol, long max_evaluations) {
    if (!(tol > 0.0)) throw InvalidArgument("adaptive_integrate: tol must be positive");
    const bool a_inf = std::isinf(a);
    const bool b_inf = std::isinf(b);
    if (a_inf && b_inf) {
        auto lo = adaptive_integrate(f, -kInfinity, 0.0, 0.5 * tol, max_evaluations / 2);
        auto hi = adaptive_integrate(f, 0.0, kInfinity, 0.5 * tol, max_evaluations / 2);
        return IntegralResult{lo.value + hi.value, lo.error + hi.error,
                              lo.evaluations + hi.evaluations};
    }
    if (b_inf) {
        auto g = [&f, a](double u) {
            const double om = 1.0 - u;
            return f(a + u / om) / (om * om);
        };
        return adaptive_core(g, 0.0, 1.0, tol, max_evaluations);
    }
    if (a_inf) {
        auto g = [&f, b](double u) {
            const double om = 1.0 - u;
            return f(b - u / om) / (om * om);
        };
        return adaptive_core(g, 0.0, 1.0, tol, max_evaluations);
    }
    if (a == b) return IntegralResult{0.0, 0.0, 0};
    if (a > b) throw InvalidArgument("adaptive_integrate: need a <= b");
    return adaptive_core(f, a, b, tol, max_evaluations);
}

TensorGrid::TensorGrid(Domain domain, std::vector<Axis> axes, bool spherical)
    : domain_(domain), axes_(std::move(axes)), spherical_(spherical) {
    if (axes_.empty()) throw InvalidArgument("TensorGrid: no axes");
    size_ = 1;
    for (const auto& ax : axes_) {
        if (ax.nodes.size() != ax.weights.size() || ax.nodes.empty())
            throw InvalidArgument("TensorGrid: malformed axis");
        for (double w : ax.weights)
            if (!(w > 0.0)) throw InvalidArgument("TensorGrid: weights must be positive");
        size_ *= ax.nodes.size();
    }
}

double TensorGrid::total_weight() const {
    double prod = 1.0;
    for (const auto& ax : axes_) {
        Accumulator acc;
        for (double w : ax.weights) acc.add(w);
        prod *= acc.value();
    }
    return prod;
}

void TensorGrid::set_box(Vec lo, Vec hi) {
    if (static_cast<int>(lo.size()) != dim() || static_cast<int>(hi.size()) != dim())
        throw InvalidArgument("TensorGrid: box must match the dimension");
    box_lo_ = std::move(lo);
    box_hi_ = std::move(hi);
}

void TensorGrid::bounding_box(Vec& lo, Vec& hi) const {
    if (!box_lo_.empty()) {
        lo = box_lo_;
        hi = box_hi_;
        return;
    }
    const int d = dim();
    lo.assign(d, 0.0);
    hi.assign(d, 0.0);
    if (spherical_) {
        const double r_hi = axes_[0].nodes.back();
        for (int k = 0; k < d; ++k) {
            lo[k] = -r_hi;
            hi[k] = r_hi;
        }
        return;
    }
    for (int k = 0; k < d; ++k) {
        auto [mn, mx] = std::minmax_element(axes_[k].nodes.begin(), axes_[k].nodes.end());
        lo[k] = *mn;
        hi[k] = *mx;
    }
}

void TensorGrid::materialize(std::vector<double>& points, std::vector<double>& weights) const {
    const int d = dim();
    points.clear();
    weights.clear();
    points.reserve(size_ * d);
    weights.reserve(size_);
    for_each([&](std::span<const double> p, double w) {
        points.insert(points.end(), p.begin(), p.end());
        weights.push_back(w);
    });
}

void TensorGrid::to_cartesian(const std::vector<double>& comp, std::vector<double>& cart) const {
    const int d = dim();
    const double r = comp[0];
    double sin_prod = 1.0;
    for (int k = 0; k + 1 < d; ++k) {
        const double ang = comp[k + 1];
        cart[k] = r * sin_prod * std::cos(ang);
        sin_prod *= std::sin(ang);
    }
    cart[d - 1] = r * sin_prod;
}

namespace {

// Int sin^m(t) dt, exact recursive antiderivative.
double sin_power_antiderivative(int m, double theta) {
    if (m == 0) return theta;
    if (m == 1) return -std::cos(theta);
    const double s = std::sin(theta);
    return (-std::cos(theta) * std::pow(s, m - 1) +
            (m - 1) * sin_power_antiderivative(m - 2, theta)) /
           m;
}

TensorGrid::Axis axis_from_edges(const std::vector<double>& edges) {
    TensorGrid::Axis ax;
    const std::size_t m = edges.size() - 1;
    ax.nodes.resize(m);
    ax.weights.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        ax.nodes[j] = 0.5 * (edges[j] + edges[j + 1]);
        ax.weights[j] = edges[j + 1] - edges[j];
    }
    return ax;
}

}  // namespace

TensorGrid build_halfspace_grid(int n, double half_width, double height_cap, int m,
                                double grading) {
    if (n < 2) throw InvalidArgument("build_halfspace_grid: n must be >= 2");
    if (!(half_width > 0.0) || !(height_cap > 0.0))
        throw InvalidArgument("build_halfspace_grid: box extents must be positive");
    if (m < 8) throw InvalidArgument("build_halfspace_grid: need at least 8 nodes per axis");
    if (!(grading >= 1.0)) throw InvalidArgument("build_halfspace_grid: grading must be >= 1");

    std::vector<TensorGrid::Axis> axes;
    std::vector<double> edges(m + 1);
    for (int j = 0; j <= m; ++j)
        edges[j] = -half_width + 2.0 * half_width * j / m;
    for (int k = 0; k < n - 1; ++k) axes.push_back(axis_from_edges(edges));

    for (int j = 0; j <= m; ++j)
        edges[j] = height_cap * std::pow(static_cast<double>(j) / m, grading);
    axes.push_back(axis_from_edges(edges));

    TensorGrid grid(Domain::HalfSpace, std::move(axes), false);
    Vec lo(n, -half_width), hi(n, half_width);
    lo[n - 1] = 0.0;
    hi[n - 1] = height_cap;
    grid.set_box(std::move(lo), std::move(hi));
    return grid;
}

TensorGrid halfspace_window_grid(int n, const Vec& center, const Vec& half_widths,
                                 int m, double grading) {
    if (n < 2) throw InvalidArgument("halfspace_window_grid: n must be >= 2");
    if (static_cast<int>(center.size()) != n || static_cast<int>(half_widths.size()) != n)
        throw InvalidArgument("halfspace_window_grid: center/half_widths must have length n");
    if (m < 4) throw InvalidArgument("halfspace_window_grid: need at least 4 nodes per axis");
    if (!(grading >= 1.0)) throw InvalidArgument("halfspace_window_grid: grading must be >= 1");
    if (center[n - 1] - half_widths[n - 1] < 0.0)
        throw InvalidArgument("halfspace_window_grid: window dips below the boundary");

    std::vector<TensorGrid::Axis> axes;
    std::vector<double> edges(m + 1);
    for (int k = 0; k < n; ++k) {
        if (!(half_widths[k] > 0.0))
            throw InvalidArgument("halfspace_window_grid: half widths must be positive");
        for (int j = 0; j <= m; ++j) {
            const double xi = -1.0 + 2.0 * static_cast<double>(j) / m;
            const double s = (xi >= 0 ? 1.0 : -1.0) * std::pow(std::abs(xi), grading);
            edges[j] = center[k] + half_widths[k] * s;
        }
        axes.push_back(axis_from_edges(edges));
    }
    TensorGrid grid(Domain::HalfSpace, std::move(axes), false);
    Vec lo(n), hi(n);
    for (int k = 0; k < n; ++k) {
        lo[k] = center[k] - half_widths[k];
        hi[k] = center[k] + half_widths[k];
    }
    grid.set_box(std::move(lo), std::move(hi));
    return grid;
}

TensorGrid ball_grid(int n, int m_radial, int m_angular, double r_min, double r_max,
                     bool log_radial) {
    if (n < 2) throw InvalidArgument("ball_grid: n must be >= 2");
    if (m_radial < 2 || m_angular < 2)
        throw InvalidArgument("ball_grid: need at least 2 cells per axis");
    if (!(r_min >= 0.0) || !(r_max > r_min))
        throw InvalidArgument("ball_grid: need 0 <= r_min < r_max");
    if (log_radial && !(r_min > 0.0))
        throw InvalidArgument("ball_grid: geometric radial subdivision needs r_min > 0");

    std::vector<TensorGrid::Axis> axes;

    TensorGrid::Axis radial;
    radial.nodes.resize(m_radial);
    radial.weights.resize(m_radial);
    auto r_edge = [&](int j) {
        const double t = static_cast<double>(j) / m_radial;
        return log_radial ? r_min * std::pow(r_max / r_min, t)
                          : r_min + (r_max - r_min) * t;
    };
    for (int j = 0; j < m_radial; ++j) {
        const double r0 = r_edge(j), r1 = r_edge(j + 1);
        radial.nodes[j] = 0.5 * (r0 + r1);
        radial.weights[j] = (std::pow(r1, n) - std::pow(r0, n)) / n;
    }
    axes.push_back(std::move(radial));

    for (int k = 1; k <= n - 2; ++k) {
        const int expo = n - 1 - k;
        TensorGrid::Axis theta;
        theta.nodes.resize(m_angular);
        theta.weights.resize(m_angular);
        for (int j = 0; j < m_angular; ++j) {
            const double t0 = kPi * j / m_angular;
            const double t1 = kPi * (j + 1) / m_angular;
            theta.nodes[j] = 0.5 * (t0 + t1);
            theta.weights[j] = sin_power_antiderivative(expo, t1) -
                               sin_power_antiderivative(expo, t0);
        }
        axes.push_back(std::move(theta));
    }

    const int m_phi = 2 * m_angular;
    TensorGrid::Axis phi;
    phi.nodes.resize(m_phi);
    phi.weights.assign(m_phi, 2.0 * kPi / m_phi);
    for (int j = 0; j < m_phi; ++j) phi.nodes[j] = 2.0 * kPi * (j + 0.5) / m_phi;
    axes.push_back(std::move(phi));

    const Domain dom = (r_min >= 1.0) ? Domain::BallExterior : Domain::Ball;
    TensorGrid grid(dom, std::move(axes), true);
    grid.set_box(Vec(n, -r_max), Vec(n, r_max));
    return grid;
}

IntegralResult quadratic_form_singular(const SingularKernel& kernel,
                                       std::span<const double> f_values,
                                       const TensorGrid& grid) {
    if (f_values.size() != grid.size())
        throw InvalidArgument("quadratic_form_singular: value count does not match grid");
    if (grid.size() > 20000)
        throw InvalidArgument("quadratic_form_singular: dense evaluation is capped at 2e4 points");
    const int d = grid.dim();
    if (!(kernel.order < d))
        throw InvalidArgument("quadratic_form_singular: singularity is not cell-integrable");

    std::vector<double> pts, w;
    grid.materialize(pts, w);
    const std::size_t n_pts = w.size();

    Accumulator off_diag;
    long evals = 0;
    for (std::size_t i = 0; i < n_pts; ++i) {
        if (f_values[i] == 0.0) continue;
        const std::span<const double> pi(&pts[i * d], d);
        for (std::size_t j = i + 1; j < n_pts; ++j) {
            if (f_values[j] == 0.0) continue;
            const std::span<const double> pj(&pts[j * d], d);
            double kij;
            try {
                kij = kernel.eval(pi, pj);
            } catch (const std::exception& e) {
                std::ostringstream os;
                os << "quadratic_form_singular: kernel failed at pair index (" << i << ", "
                   << j << "): " << e.what();
                throw NumericsError(os.str());
            }
            ++evals;
            off_diag.add(2.0 * w[i] * w[j] * f_values[i] * f_values[j] * kij);
        }
    }

    // Diagonal cells: integrate the leading singular term diag_coeff*|z|^{-s}
    // over a ball with the cell's volume.
    const double surf = unit_sphere_surface(d);
    const double ball_vol = unit_ball_volume(d);
    Accumulator diag;
    for (std::size_t i = 0; i < n_pts; ++i) {
        if (f_values[i] == 0.0) continue;
        const double rho = std::pow(w[i] / ball_vol, 1.0 / d);
        const double cell_self =
            kernel.diag_coeff * surf * std::pow(rho, d - kernel.order) / (d - kernel.order);
        diag.add(f_values[i] * f_values[i] * w[i] * cell_self);
    }

    IntegralResult res;
    res.value = off_diag.value() + diag.value();
    res.error = std::abs(diag.value());
    res.evaluations = evals;
    return res;
}

}  // namespace hsm
