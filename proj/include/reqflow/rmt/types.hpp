#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace reqflow::rmt {

enum class ItemKind { hwrq, testcase, waiver };
enum class Domain { simulation, formal, both };
enum class ReviewState { draft, in_review, approved };
enum class TestStatus { pass, fail, not_run };
enum class RelKind { verifies, derived_from, waives };

std::string_view to_string(ItemKind v);
std::string_view to_string(Domain v);
std::string_view to_string(ReviewState v);
std::string_view to_string(TestStatus v);
std::string_view to_string(RelKind v);

std::optional<ItemKind> parse_item_kind(std::string_view s);
std::optional<Domain> parse_domain(std::string_view s);
std::optional<ReviewState> parse_review_state(std::string_view s);
std::optional<TestStatus> parse_test_status(std::string_view s);
std::optional<RelKind> parse_rel_kind(std::string_view s);

bool is_legal_transition(ReviewState from, ReviewState to);

struct RmtItem {
    std::string id;
    ItemKind kind = ItemKind::hwrq;
    std::string title;
    std::string text;
    std::optional<Domain> domain;             // testcases only
    std::optional<std::string> applicability; // superset items only
    ReviewState state = ReviewState::draft;
    std::vector<ReviewState> history;         // states entered, oldest first
    std::optional<std::string> origin;        // subset items only
    std::optional<std::string> config_tag;    // subset items only
    std::optional<std::string> target;        // waivers: the waived hwrq

    // Verification results, subset testcases only.
    TestStatus status = TestStatus::not_run;
    std::optional<double> coverage;
    std::string report_link;

    bool is_subset() const { return origin.has_value(); }
    bool operator==(const RmtItem&) const = default;
};

struct Relationship {
    std::string from;
    std::string to;
    RelKind kind = RelKind::verifies;

    auto operator<=>(const Relationship&) const = default;
};

struct SubsetReport {
    std::string config_tag;
    std::size_t hwrqs = 0;
    std::size_t testcases = 0;
    std::size_t waivers = 0;
    std::vector<std::string> waiver_required;  // derived hwrqs with no derived testcase
    std::vector<std::string> skipped;          // approved superset items not selected

    bool operator==(const SubsetReport&) const = default;
};

struct TestResultUpdate {
    std::string id;
    TestStatus status = TestStatus::not_run;
    double coverage = 0.0;
    std::string report_link;
};

}  // namespace reqflow::rmt
