#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hsm/functionals.hpp"
#include "hsm/geometry.hpp"
#include "hsm/kernels.hpp"
#include "hsm/report.hpp"
#include "hsm/special.hpp"
#include "hsm/suites.hpp"

namespace {

hsm::Vec parse_point(const std::string& text) {
    hsm::Vec out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.size() < 2) throw hsm::InvalidArgument("point needs at least two coordinates");
    return out;
}

hsm::HalfSpacePoint to_halfspace(const hsm::Vec& coords) {
    hsm::Vec x(coords.begin(), coords.end() - 1);
    return hsm::HalfSpacePoint(std::move(x), coords.back());
}

int cmd_constants(int n, double alpha) {
    using namespace hsm;
    std::printf("n = %d, alpha = %.17g\n", n, alpha);
    const KernelParams params(n, alpha);
    std::printf("beta = %.17g  regime = %s\n", params.beta(), regime_name(params.regime()).c_str());
    if (n >= 3) std::printf("sobolev_constant(%d) = %.17g\n", n, sobolev_constant(n));
    if (alpha < n) {
        std::printf("hls_constant(%d, %g) = %.17g\n", n, alpha, hls_constant(n, alpha));
        std::printf("psi_prefactor = %.17g\n", psi_prefactor(n, alpha));
        const double bound = psi_prefactor(n, alpha) * hls_constant(n, alpha);
        std::printf("quotient bound psi_prefactor*C = %.17g\n", bound);
        if (n >= 3)
            std::printf("bound * sobolev_constant = %.17g\n", bound * sobolev_constant(n));
    }
    if (alpha < n + 1) std::printf("phi_prefactor = %.17g\n", phi_prefactor(n, alpha));
    const double beta = params.beta();
    if (beta > 0.5 && beta <= 1.0)
        std::printf("f_limit(beta) = %.17g\n", f_limit(beta).value());
    else if (beta >= 0.0 && beta <= 0.5)
        std::printf("f_limit(beta) = divergent\n");
    return 0;
}

int cmd_kernel(const std::string& which, int n, double alpha, const std::string& point,
               const std::string& point2, double t) {
    using namespace hsm;
    const KernelParams params(n, alpha);
    auto p = to_halfspace(parse_point(point));
    auto q = to_halfspace(parse_point(point2.empty() ? point : point2));
    if (p.dim() != n) throw InvalidArgument("point dimension does not match --n");
    KernelPointPair pair(p, q);
    double value = 0.0;
    if (which == "heat") value = heat_kernel(params, pair, t);
    else if (which == "phi") value = phi_kernel(params, pair);
    else if (which == "psi") value = psi_kernel(params, pair);
    else throw InvalidArgument("kernel must be one of heat, phi, psi");
    std::printf("%s(%s; %s%s) = %.17g\n", which.c_str(), point.c_str(),
                point2.empty() ? point.c_str() : point2.c_str(),
                which == "heat" ? (", t=" + std::to_string(t)).c_str() : "", value);
    return 0;
}

int cmd_verify(hsm::SuiteConfig cfg) {
    using namespace hsm;
    auto report = run_suite(cfg.suite, cfg);
    std::string rendered;
    if (cfg.format == "json") rendered = report_json(report);
    else if (cfg.format == "csv") rendered = report_csv(report);
    else rendered = report_text(report);
    if (!cfg.out_path.empty()) {
        write_file_atomic(cfg.out_path, rendered);
        std::printf("report written to %s (%d pass, %d fail, %d error)\n",
                    cfg.out_path.c_str(), report.passed(), report.failed(), report.errored());
    } else {
        std::fputs(rendered.c_str(), stdout);
    }
    return exit_code_for(report);
}

int cmd_sweep(const hsm::SweepConfig& sc, const std::string& out) {
    auto rows = hsm::bubble_sweep(sc);
    hsm::write_sweep_csv(out, rows);
    std::printf("wrote %zu rows to %s\n", rows.size(), out.c_str());
    for (const auto& r : rows)
        std::printf("  eps %-12.6g quotient %-14.8g err %.3g\n", r.epsilon, r.quotient,
                    r.err_estimate);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical verification toolkit for a sharp half-space inequality"};
    app.require_subcommand(1);

    int n = 3;
    double alpha = 2.0;
    auto* constants = app.add_subcommand("constants", "print the closed-form constants");
    constants->add_option("--n", n, "dimension");
    constants->add_option("--alpha", alpha, "fractional order");

    std::string which = "phi", point = "0,0,1", point2;
    double t = 1.0;
    auto* kernel = app.add_subcommand("kernel", "evaluate a kernel at a point pair");
    kernel->add_option("--which", which, "heat | phi | psi");
    kernel->add_option("--n", n, "dimension");
    kernel->add_option("--alpha", alpha, "fractional order");
    kernel->add_option("--point", point, "comma-separated coordinates, height last");
    kernel->add_option("--point2", point2, "second point (defaults to --point)");
    kernel->add_option("--t", t, "time (heat kernel only)");

    hsm::SuiteConfig cfg;
    std::string config_path;
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", cfg.suite, "suite id or 'all'");
    verify->add_option("--grid-m", cfg.grid_m, "grid resolution override");
    verify->add_option("--box", cfg.box, "box size override");
    verify->add_option("--tol", cfg.tol, "tolerance override");
    verify->add_option("--seed", cfg.seed, "corpus seed");
    verify->add_option("--workers", cfg.workers, "worker cap (also HSM_WORKERS)");
    verify->add_option("--out", cfg.out_path, "output path");
    verify->add_option("--format", cfg.format, "json | csv | text");
    verify->add_option("--config", config_path, "key=value config file; flags override");

    hsm::SweepConfig sc;
    std::string sweep_out = "sweep.csv";
    auto* sweep = app.add_subcommand("sweep", "concentrating-family quotient sweep");
    sweep->add_option("--eps-start", sc.eps_start, "largest scale");
    sweep->add_option("--eps-end", sc.eps_end, "smallest scale");
    sweep->add_option("--steps", sc.steps, "number of scales");
    sweep->add_option("--height", sc.height, "bubble center height");
    sweep->add_option("--radius", sc.radius, "cutoff radius");
    sweep->add_option("--grid-m", sc.grid_m, "nodes per axis");
    sweep->add_option("--out", sweep_out, "output csv path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (constants->parsed()) return cmd_constants(n, alpha);
        if (kernel->parsed()) return cmd_kernel(which, n, alpha, point, point2, t);
        if (verify->parsed()) {
            if (!config_path.empty()) {
                // flags override the file: reparse the file first, then apply
                // any flags the user actually passed
                hsm::SuiteConfig from_file = hsm::apply_config_file(config_path, hsm::SuiteConfig{});
                if (verify->count("--suite") == 0) cfg.suite = from_file.suite;
                if (verify->count("--grid-m") == 0) cfg.grid_m = from_file.grid_m;
                if (verify->count("--box") == 0) cfg.box = from_file.box;
                if (verify->count("--tol") == 0) cfg.tol = from_file.tol;
                if (verify->count("--seed") == 0) cfg.seed = from_file.seed;
                if (verify->count("--workers") == 0) cfg.workers = from_file.workers;
                if (verify->count("--out") == 0) cfg.out_path = from_file.out_path;
                if (verify->count("--format") == 0) cfg.format = from_file.format;
            }
            return cmd_verify(cfg);
        }
        if (sweep->parsed()) return cmd_sweep(sc, sweep_out);
    } catch (const hsm::InvalidArgument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "failure: %s\n", e.what());
        return 3;
    }
    return 0;
}
