#pragma once

#include "reqflow/regression/types.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace reqflow::regression {

/// Parsed form of the session file:
///   session "<name>" { seed = <u64>; group "<formal|sim>" { test "<id>" { runner = <r>; count = <n>; } } }
struct SessionSpec {
    struct Test {
        std::string name;
        std::string group;
        Runner runner = Runner::sim;
        std::uint32_t count = 1;

        bool operator==(const Test&) const = default;
    };

    std::string name;
    std::uint64_t seed = 0;
    std::vector<Test> tests;

    bool operator==(const SessionSpec&) const = default;
};

/// Throws ParseError with the byte offset of the offending token.
SessionSpec parse_session(std::string_view text);

/// Canonical text: groups formal then sim, tests sorted by name, empty
/// groups omitted.
std::string write_session(const SessionSpec& spec);

}  // namespace reqflow::regression
