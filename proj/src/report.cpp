#include "hsm/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hsm {

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw NumericsError("write_file_atomic: cannot open " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw NumericsError("write_file_atomic: write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec)
        throw NumericsError("write_file_atomic: rename to " + target.string() + " failed: " +
                            ec.message());
}

std::string case_status_name(CaseStatus s) {
    switch (s) {
        case CaseStatus::Pass: return "pass";
        case CaseStatus::Fail: return "fail";
        case CaseStatus::Error: return "error";
    }
    return "unknown";
}

void VerificationReport::add(CaseResult c) {
    if (c.anchor.empty())
        throw InvalidArgument("VerificationReport: case '" + c.name + "' carries no anchor");
    cases.push_back(std::move(c));
}

int VerificationReport::passed() const {
    int k = 0;
    for (const auto& c : cases) k += (c.status == CaseStatus::Pass);
    return k;
}

int VerificationReport::failed() const {
    int k = 0;
    for (const auto& c : cases) k += (c.status == CaseStatus::Fail);
    return k;
}

int VerificationReport::errored() const {
    int k = 0;
    for (const auto& c : cases) k += (c.status == CaseStatus::Error);
    return k;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CaseResult check_close(std::string name, std::string anchor, double expected, double got,
                       double tolerance, bool relative) {
    CaseResult c;
    c.name = std::move(name);
    c.anchor = std::move(anchor);
    c.expected = expected;
    c.got = got;
    c.tolerance = tolerance;
    const double scale = relative ? std::max(std::abs(expected), 1e-300) : 1.0;
    const double deviation = std::abs(got - expected) / scale;
    c.margin = tolerance - deviation;
    c.status = (deviation <= tolerance && std::isfinite(got)) ? CaseStatus::Pass
                                                              : CaseStatus::Fail;
    if (relative) c.detail = "relative";
    return c;
}

CaseResult check_true(std::string name, std::string anchor, bool condition, double margin,
                      double budget, std::string detail) {
    CaseResult c;
    c.name = std::move(name);
    c.anchor = std::move(anchor);
    c.expected = 1.0;
    c.got = condition ? 1.0 : 0.0;
    c.tolerance = budget;
    c.margin = margin;
    c.status = condition ? CaseStatus::Pass : CaseStatus::Fail;
    c.detail = std::move(detail);
    return c;
}

namespace {

nlohmann::ordered_json case_to_json(const CaseResult& c) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["anchor"] = c.anchor;
    auto params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : c.params) params[k] = v;
    j["params"] = params;
    j["expected"] = format_double(c.expected);
    j["got"] = format_double(c.got);
    j["tolerance"] = format_double(c.tolerance);
    j["margin"] = format_double(c.margin);
    j["status"] = case_status_name(c.status);
    j["detail"] = c.detail;
    return j;
}

}  // namespace

std::string report_json(const VerificationReport& report) {
    nlohmann::ordered_json j;
    j["suite"] = report.suite;
    j["anchor"] = report.anchor;
    j["summary"] = {{"pass", report.passed()},
                    {"fail", report.failed()},
                    {"error", report.errored()},
                    {"total", static_cast<int>(report.cases.size())}};
    nlohmann::ordered_json env;
    for (const auto& [k, v] : report.environment) env[k] = v;
    j["environment"] = env;
    j["timestamp"] = report.timestamp;
    nlohmann::ordered_json cases = nlohmann::ordered_json::array();
    for (const auto& c : report.cases) cases.push_back(case_to_json(c));
    j["cases"] = cases;
    return j.dump(2) + "\n";
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += "\"";
    return out;
}

}  // namespace

std::string report_csv(const VerificationReport& report) {
    std::ostringstream os;
    os << "suite,case,status,anchor,expected,got,tolerance,margin,params,detail\n";
    for (const auto& c : report.cases) {
        std::string params;
        for (const auto& [k, v] : c.params) {
            if (!params.empty()) params += ";";
            params += k + "=" + v;
        }
        os << csv_escape(report.suite) << "," << csv_escape(c.name) << ","
           << case_status_name(c.status) << "," << csv_escape(c.anchor) << ","
           << format_double(c.expected) << "," << format_double(c.got) << ","
           << format_double(c.tolerance) << "," << format_double(c.margin) << ","
           << csv_escape(params) << "," << csv_escape(c.detail) << "\n";
    }
    return os.str();
}

std::string report_text(const VerificationReport& report) {
    std::ostringstream os;
    os << "suite " << report.suite << " [" << report.anchor << "]\n";
    for (const auto& c : report.cases) {
        os << "  " << (c.status == CaseStatus::Pass   ? "PASS "
                       : c.status == CaseStatus::Fail ? "FAIL "
                                                      : "ERROR")
           << " " << c.name;
        if (c.status != CaseStatus::Pass) {
            os << "  expected " << format_double(c.expected) << " got "
               << format_double(c.got) << " tol " << format_double(c.tolerance)
               << " margin " << format_double(c.margin);
            if (!c.detail.empty()) os << "  (" << c.detail << ")";
        }
        os << "\n";
    }
    os << "  " << report.passed() << " passed, " << report.failed() << " failed, "
       << report.errored() << " errored\n";
    return os.str();
}

}  // namespace hsm
