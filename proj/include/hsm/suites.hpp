#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsm/report.hpp"

namespace hsm {

struct SuiteConfig {
    std::string suite = "all";
    int grid_m = 0;        // 0 = per-suite default
    double box = 0.0;      // 0 = per-suite default
    double tol = 0.0;      // 0 = per-case defaults
    std::uint64_t seed = 12345;
    int workers = 0;       // 0 = HSM_WORKERS or 1
    std::string out_path;  // empty = stdout only
    std::string format = "text";
};

// Plain key=value lines; '#' starts a comment. Keys mirror the CLI flags:
// suite, grid-m, box, tol, seed, workers, out, format. Flags override the file.
SuiteConfig apply_config_file(const std::string& path, SuiteConfig base);

// Suite ids, without the umbrella "all".
std::vector<std::string> suite_names();

VerificationReport run_suite(const std::string& name, const SuiteConfig& config);

// 0 all passed; 2 at least one mathematical failure; 3 infrastructure error.
int exit_code_for(const VerificationReport& report);

}  // namespace hsm
