#pragma once

#include "reqflow/regression/types.hpp"
#include "reqflow/rmt/types.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace reqflow::vplan {

/// Dot-separated pattern; `*` matches exactly one segment, `**` one or more.
class MappingPattern {
public:
    /// Throws a validation error for empty input, empty segments or
    /// wildcards embedded inside a segment.
    static MappingPattern parse(std::string_view text);

    const std::string& str() const { return text_; }
    const std::vector<std::string>& segments() const { return segments_; }

private:
    std::string text_;
    std::vector<std::string> segments_;
};

bool match(const MappingPattern& pattern, std::string_view entity);

/// chk.<test>.<check> or cov.<test>.<point>.<bin>: at least two non-empty
/// segments, first one chk or cov.
bool is_entity_name(std::string_view name);

/// Exact non-negative fraction, always in lowest terms.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t num, std::int64_t den);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational operator+(const Rational& o) const;
    Rational operator/(std::int64_t d) const;
    bool operator==(const Rational&) const = default;
    std::strong_ordering operator<=>(const Rational& o) const;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// "%.1f" of the exact value, rounding half away from zero.
std::string format_percent(const Rational& r);

struct Rollup {
    rmt::TestStatus status = rmt::TestStatus::not_run;
    Rational coverage;            // percent
    std::uint64_t checks = 0;     // matched check entities
    std::uint64_t bins = 0;       // matched declared bins
    std::uint64_t bins_hit = 0;
    bool no_bins = false;         // coverage is the 100% convention

    std::uint64_t matched() const { return checks + bins; }
    bool operator==(const Rollup&) const = default;
};

struct WaiverRef {
    std::string id;
    rmt::ReviewState state = rmt::ReviewState::draft;

    bool operator==(const WaiverRef&) const = default;
};

struct PlanItem {
    std::string id;
    std::string title;
    rmt::ItemKind kind = rmt::ItemKind::hwrq;
    std::string origin;
    std::optional<rmt::Domain> domain;
    std::set<std::string> patterns;
    std::vector<std::string> verified_by;  // hwrq: verifying testcase ids, sorted
    std::vector<WaiverRef> waivers;        // hwrq: waivers targeting it, sorted
    std::optional<Rollup> rollup;

    bool has_approved_waiver() const;
    /// hwrq without a verifying testcase and without an approved waiver.
    bool blocking() const;
    bool operator==(const PlanItem&) const = default;
};

struct VPlan {
    std::string config_tag;
    std::vector<PlanItem> requirements;  // sorted by id
    std::vector<PlanItem> testcases;     // sorted by id
    std::optional<std::uint64_t> unmapped;

    PlanItem* find(std::string_view id);
    const PlanItem* find(std::string_view id) const;
    std::size_t size() const { return requirements.size() + testcases.size(); }
    bool operator==(const VPlan&) const = default;
};

/// One PlanItem per hwrq and testcase; waivers attach to the hwrq they target.
VPlan build_vplan(std::string_view ipvs_document);

/// Set semantics; throws not_found for an unknown item and validation for a
/// malformed pattern.
void add_mapping_pattern(VPlan& plan, std::string_view item_id, std::string_view pattern);

/// Gives each testcase without explicit patterns chk.<id>.** and cov.<id>.**.
void apply_default_mappings(VPlan& plan);

/// Rolls session results up into every item. Testcases are rolled up from
/// their matched entities; hwrqs take the worst status and the mean
/// coverage of their verifying testcases (and of their own patterns, when
/// they have any).
VPlan rollup(VPlan plan, const regression::SessionResult& session);

std::string to_xml(const VPlan& plan);
VPlan read_vplan(std::string_view document);

}  // namespace reqflow::vplan
