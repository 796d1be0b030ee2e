#pragma once

#include "reqflow/config.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace reqflow {

enum class CmpOp { eq, ne, lt, le, gt, ge };

/// Applicability expression over IpConfiguration fields. Literals for enum
/// keys are stored in canonical token form so printing and re-parsing
/// yields an equal tree regardless of the original quoting.
struct Predicate {
    enum class Kind { constant, compare, has, logical_and, logical_or, logical_not };

    Kind kind = Kind::constant;
    bool value = true;
    CmpOp cmp = CmpOp::eq;
    std::string key;
    std::variant<std::int64_t, std::string> literal;
    std::vector<Predicate> args;

    bool operator==(const Predicate&) const = default;
};

/// Throws ParseError (syntax, with offset) or Error (unknown key, type mismatch).
Predicate parse_predicate(std::string_view text);

std::string to_string(const Predicate& p);

bool eval_predicate(const Predicate& p, const IpConfiguration& cfg);

}  // namespace reqflow
