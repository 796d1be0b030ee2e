#pragma once

#include "reqflow/config.hpp"
#include "reqflow/regression/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reqflow::regression {

/// Executes one run of `test` against a fresh DUT model.
RunResult run_test(const TestDescriptor& test, const IpConfiguration& cfg, std::uint32_t run_index,
                   std::uint64_t session_seed);

/// Analytic size of an exhaustive scenario's enumeration space.
std::uint64_t exhaustive_case_count(Scenario scenario, const IpConfiguration& cfg);

/// Runs every (test, run index) of the session on an OpenMP worker pool of
/// `jobs` threads (0 = runtime default). Results are merged in sorted
/// order, so the output does not depend on scheduling.
SessionResult run_session(std::string_view session_text, std::span<const TestDescriptor> tests,
                          const IpConfiguration& cfg, int jobs = 0);

/// Serial reference. `order`, when given, is a permutation of the run list
/// and sets the execution order.
SessionResult run_session_serial(std::string_view session_text, std::span<const TestDescriptor> tests,
                                 const IpConfiguration& cfg, std::span<const std::size_t> order = {});

struct FailureBundle {
    int exit_code = 0;  // 0 no fails, 1 fails present, 2 infrastructure error
    std::string directory;
    std::vector<std::string> logs;
    std::string summary_path;
    std::string error;
};

/// Writes `<out_dir>/failures/summary.txt` plus one log per failing run.
FailureBundle collect_failures(const SessionResult& result, const std::string& out_dir);

}  // namespace reqflow::regression
