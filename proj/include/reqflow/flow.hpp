#pragma once

#include "reqflow/config.hpp"
#include "reqflow/rmt/service.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace reqflow::flow {

/// Fixture shipped with the sources.
std::string default_superset_path();

struct FlowOptions {
    std::string config_path;
    std::optional<std::string> config_text;  // used instead of config_path when set
    std::string superset_path = default_superset_path();
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    std::optional<std::string> archive_dir;  // default <out>/archive
    std::optional<std::string> store_path;   // default <out>/store.xml, reset per run
    std::optional<std::string> stamp;
    int jobs = 0;
};

enum class StepStatus { ok, failed, skipped };
std::string_view to_string(StepStatus s);

inline constexpr const char* kSteps[] = {"derive", "plan", "generate", "run", "report"};

struct FlowOutcome {
    int exit_code = 0;  // 0 clean, 1 test failures, 2 infrastructure error
    std::map<std::string, StepStatus> steps;
    std::vector<std::string> artifacts;
    std::string error;  // "<step>: <message>" on exit 2
    std::string config_tag;
    std::size_t runs = 0;
    std::size_t fails = 0;
    double coverage_mean = 0.0;  // mean testcase coverage
    std::string archive_link;
};

FlowOutcome run_flow(const FlowOptions& options);

// Individual steps. Each reads the previous step's artifact from `out_dir`.

/// Loads `superset_path` into the store unless it already holds superset items.
void ensure_superset(rmt::StoreService& store, const std::string& superset_path);

/// Derives the subset and writes subset-report.xml and ipvs.xml.
rmt::SubsetReport step_derive(rmt::StoreService& store, const IpConfiguration& cfg, const std::string& out_dir);
/// ipvs.xml -> vplan.xml
void step_plan(const std::string& out_dir);
/// ipvs.xml -> tests.xml, session.vsif
void step_generate(const IpConfiguration& cfg, std::uint64_t seed, const std::string& out_dir);
/// session.vsif + tests.xml -> session-result.xml, failures/. Returns the
/// regression exit code.
int step_run(const IpConfiguration& cfg, int jobs, const std::string& out_dir);

struct ReportOutcome {
    std::string link;
    std::size_t pushed = 0;
    std::size_t fails = 0;
    double coverage_mean = 0.0;
};

/// vplan.xml + session-result.xml -> vplan-rollup.xml, vplan.html,
/// rmt-report.xml; archives the HTML and pushes the testcase rows.
ReportOutcome step_report(rmt::ResultSink& sink, const std::string& out_dir, const std::string& archive_dir,
                          const std::optional<std::string>& stamp);

struct SweepRow {
    std::string config_tag;
    std::string summary;  // ecc/tech/width/lp
    int exit_code = 0;
    std::size_t fails = 0;
    double coverage_mean = 0.0;
    double wall_seconds = 0.0;
    std::string error;
};

/// Runs the flow for every configuration of the matrix under
/// <out>/<config_tag>/ and writes <out>/sweep-summary.tsv.
std::vector<SweepRow> run_sweep(const std::string& matrix_path, const FlowOptions& base);

}  // namespace reqflow::flow
