#pragma once

#include "reqflow/config.hpp"
#include "reqflow/regression/session.hpp"
#include "reqflow/regression/types.hpp"
#include "reqflow/rmt/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace reqflow::regression {

struct TestcaseRef {
    std::string id;
    std::string title;
    rmt::Domain domain = rmt::Domain::simulation;
};

/// Testcase items of an ipvs document, in document order.
std::vector<TestcaseRef> testcases_from_ipvs(std::string_view ipvs);

struct GeneratedRegression {
    std::vector<TestDescriptor> tests;       // sorted by name
    SessionSpec session;
    std::string session_text;
    std::vector<std::string> not_generated;  // testcases with no applicable scenario under cfg
};

inline constexpr std::uint32_t kDefaultSimCount = 4;

/// Maps each subset testcase to a scenario. Formal testcases titled with
/// ECC/EDC go to ecc_exhaustive (skipped when ecc=none), bus/decode titles to
/// bus_decode_exhaustive; simulation titles pick burst_rw, power_cycle,
/// fault_sweep by keyword and fall back to random_rw.
GeneratedRegression generate_tests(std::span<const TestcaseRef> testcases, const IpConfiguration& cfg,
                                   std::uint64_t session_seed, const std::string& session_name);

std::vector<Coverpoint> declared_coverpoints(Scenario scenario, const IpConfiguration& cfg);

}  // namespace reqflow::regression
