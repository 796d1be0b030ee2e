#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace reqflow::regression {

enum class Runner { sim, exhaustive };
enum class Scenario { ecc_exhaustive, bus_decode_exhaustive, burst_rw, random_rw, power_cycle, fault_sweep };

std::string_view to_string(Runner r);
std::string_view to_string(Scenario s);
std::optional<Runner> parse_runner(std::string_view s);
std::optional<Scenario> parse_scenario(std::string_view s);

constexpr bool is_exhaustive(Scenario s) {
    return s == Scenario::ecc_exhaustive || s == Scenario::bus_decode_exhaustive;
}

struct Coverpoint {
    std::string name;
    std::vector<std::string> bins;

    bool operator==(const Coverpoint&) const = default;
};

/// Executable stand-in for a generated testbench: which scenario to run,
/// how often, and which coverage bins it declares.
struct TestDescriptor {
    std::string name;  // the subset testcase id
    Runner runner = Runner::sim;
    Scenario scenario = Scenario::random_rw;
    std::uint32_t count = 1;
    std::vector<Coverpoint> coverpoints;

    std::vector<std::string> declared_bins() const;  // cov.<name>.<point>.<bin>
    bool operator==(const TestDescriptor&) const = default;
};

struct CheckRecord {
    std::string name;  // chk.<test>.<check>
    bool passed = true;

    bool operator==(const CheckRecord&) const = default;
};

struct RunResult {
    std::string test;
    std::uint32_t run_index = 0;
    std::uint64_t seed = 0;
    bool passed = true;
    std::uint64_t cases = 0;
    std::vector<CheckRecord> checks;     // sorted by name
    std::vector<std::string> bin_hits;   // sorted, unique
    std::string failure_log;             // non-empty iff !passed

    bool operator==(const RunResult&) const = default;
};

struct SessionResult {
    std::string session_name;
    std::string config_tag;
    std::uint64_t session_seed = 0;
    std::vector<std::string> declared_bins;  // sorted
    std::vector<RunResult> runs;             // sorted by (test, run_index)

    std::size_t fails() const;
    bool operator==(const SessionResult&) const = default;
};

std::string entity_check(std::string_view test, std::string_view check);
std::string entity_bin(std::string_view test, std::string_view point, std::string_view bin);

/// FNV-1a 64 of "<session_seed>/<test>/<run_index>".
std::uint64_t run_seed(std::uint64_t session_seed, std::string_view test, std::uint32_t run_index);

std::string to_xml(const SessionResult& result);
SessionResult read_session_result(std::string_view document);

std::string descriptors_to_xml(const std::vector<TestDescriptor>& tests, const std::string& config_tag);
std::vector<TestDescriptor> read_descriptors(std::string_view document, std::string* config_tag = nullptr);

}  // namespace reqflow::regression
