#pragma once

#include <map>
#include <string>
#include <vector>

#include "hsm/common.hpp"

namespace hsm {

enum class CaseStatus { Pass, Fail, Error };

std::string case_status_name(CaseStatus s);

// One verified statement: what was expected, what came out, with how much
// margin. `anchor` names the mathematical statement being checked, or is the
// literal tag "plumbing" for infrastructure checks.
struct CaseResult {
    std::string name;
    std::string anchor;
    std::map<std::string, std::string> params;
    double expected = 0.0;
    double got = 0.0;
    double tolerance = 0.0;
    double margin = 0.0;
    CaseStatus status = CaseStatus::Pass;
    std::string detail;
};

struct VerificationReport {
    std::string suite;
    std::string anchor;
    std::vector<CaseResult> cases;
    std::map<std::string, std::string> environment;
    std::string timestamp;

    void add(CaseResult c);
    int passed() const;
    int failed() const;
    int errored() const;
    bool all_passed() const { return failed() == 0 && errored() == 0; }
};

// Convenience constructors for the two common case shapes.
CaseResult check_close(std::string name, std::string anchor, double expected, double got,
                       double tolerance, bool relative = false);
CaseResult check_true(std::string name, std::string anchor, bool condition,
                      double margin = 0.0, double budget = 0.0, std::string detail = "");

// Serializers. JSON key order and CSV column order are stable interfaces:
// csv columns are suite,case,status,anchor,expected,got,tolerance,margin,params,detail.
std::string report_json(const VerificationReport& report);
std::string report_csv(const VerificationReport& report);
std::string report_text(const VerificationReport& report);

std::string format_double(double v);

}  // namespace hsm
