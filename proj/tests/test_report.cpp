#include <cstdio>
#include <filesystem>
#include <fstream>

#include <doctest.h>
#include <json.hpp>

#include "hsm/report.hpp"
#include "hsm/suites.hpp"

using namespace hsm;

TEST_CASE("empty report serializes to valid json") {
    VerificationReport rep;
    rep.suite = "demo";
    rep.anchor = "plumbing";
    rep.timestamp = "2000-01-01T00:00:00Z";
    auto parsed = nlohmann::json::parse(report_json(rep));
    CHECK(parsed["cases"].size() == 0);
    CHECK(parsed["summary"]["total"] == 0);
    CHECK(parsed["suite"] == "demo");
}

TEST_CASE("single passing case flattens to header plus one csv row") {
    VerificationReport rep;
    rep.suite = "demo";
    rep.anchor = "plumbing";
    rep.add(check_close("pi", "plumbing", 3.14159, 3.14159, 1e-6));
    const std::string csv = report_csv(rep);
    const auto lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == 2);
    CHECK(csv.rfind("suite,case,status,anchor,expected,got,tolerance,margin,params,detail", 0) ==
          0);
}

TEST_CASE("case helpers compute margins and statuses") {
    auto good = check_close("a", "plumbing", 1.0, 1.0 + 1e-13, 1e-12, true);
    CHECK(good.status == CaseStatus::Pass);
    CHECK(good.margin > 0.0);

    auto bad = check_close("b", "plumbing", 1.0, 1.1, 1e-3, true);
    CHECK(bad.status == CaseStatus::Fail);
    CHECK(bad.margin < 0.0);

    auto cond = check_true("c", "plumbing", true, 0.5);
    CHECK(cond.status == CaseStatus::Pass);

    VerificationReport rep;
    rep.suite = "demo";
    CaseResult anonymous;
    anonymous.name = "missing-anchor";
    CHECK_THROWS_AS(rep.add(anonymous), InvalidArgument);
}

TEST_CASE("exit codes distinguish failure kinds") {
    VerificationReport rep;
    rep.suite = "demo";
    rep.anchor = "plumbing";
    rep.add(check_true("ok", "plumbing", true));
    CHECK(exit_code_for(rep) == 0);
    rep.add(check_true("broken", "plumbing", false));
    CHECK(exit_code_for(rep) == 2);
    CaseResult err;
    err.name = "crashed";
    err.anchor = "plumbing";
    err.status = CaseStatus::Error;
    rep.add(err);
    CHECK(exit_code_for(rep) == 3);
}

TEST_CASE("atomic write replaces the file content") {
    const std::string path = "test_report_atomic.tmp.json";
    write_file_atomic(path, "first");
    write_file_atomic(path, "second");
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "second");
    std::filesystem::remove(path);
}

TEST_CASE("config file keys mirror the flags") {
    const std::string path = "test_config.tmp.cfg";
    {
        std::ofstream out(path);
        out << "# comment\n";
        out << "suite = constants\n";
        out << "grid-m = 24\n";
        out << "seed = 99\n";
        out << "format = json\n";
    }
    auto cfg = apply_config_file(path, SuiteConfig{});
    CHECK(cfg.suite == "constants");
    CHECK(cfg.grid_m == 24);
    CHECK(cfg.seed == 99);
    CHECK(cfg.format == "json");
    std::filesystem::remove(path);

    CHECK_THROWS_AS(apply_config_file("no_such_file.cfg", SuiteConfig{}), InvalidArgument);
}

TEST_CASE("constants suite runs clean and reproducibly") {
    SuiteConfig cfg;
    cfg.seed = 4242;
    auto rep1 = run_suite("constants", cfg);
    CHECK(rep1.all_passed());
    CHECK(exit_code_for(rep1) == 0);

    auto rep2 = run_suite("constants", cfg);
    rep1.timestamp.clear();
    rep2.timestamp.clear();
    CHECK(report_json(rep1) == report_json(rep2));

    CHECK_THROWS_AS(run_suite("no-such-suite", cfg), InvalidArgument);
}

TEST_CASE("every case carries an anchor") {
    SuiteConfig cfg;
    auto rep = run_suite("constants", cfg);
    for (const auto& c : rep.cases) CHECK_FALSE(c.anchor.empty());
}

TEST_CASE("worker cap from the environment is echoed into the report") {
    setenv("HSM_WORKERS", "4", 1);
    SuiteConfig cfg;
    auto rep = run_suite("constants", cfg);
    CHECK(rep.environment.at("workers") == "4");
    unsetenv("HSM_WORKERS");

    cfg.workers = 2;
    auto rep2 = run_suite("constants", cfg);
    CHECK(rep2.environment.at("workers") == "2");
}

TEST_CASE("main suite cross-references the sweep csv") {
    SuiteConfig cfg;
    cfg.grid_m = 48;  // coarse, keeps the test quick
    cfg.out_path = "test_main_report.tmp.json";
    auto rep = run_suite("main", cfg);
    CHECK(rep.environment.count("sweep_csv") == 1);
    const std::string csv_path = rep.environment.at("sweep_csv");
    CHECK(csv_path == "test_main_report.tmp.json.sweep.csv");
    std::ifstream in(csv_path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "epsilon,form,norm,quotient,err_estimate");
    std::filesystem::remove(csv_path);
}
