#include "reqflow/rmt/types.hpp"

#include <array>

namespace reqflow::rmt {

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::string_view, N>& names, std::string_view s) {
    for (std::size_t i = 0; i < N; ++i)
        if (names[i] == s) return static_cast<E>(i);
    return std::nullopt;
}

constexpr std::array<std::string_view, 3> kKinds{"hwrq", "testcase", "waiver"};
constexpr std::array<std::string_view, 3> kDomains{"simulation", "formal", "both"};
constexpr std::array<std::string_view, 3> kStates{"draft", "in_review", "approved"};
constexpr std::array<std::string_view, 3> kStatuses{"pass", "fail", "not_run"};
constexpr std::array<std::string_view, 3> kRelKinds{"verifies", "derived_from", "waives"};

}  // namespace

std::string_view to_string(ItemKind v) { return kKinds[static_cast<std::size_t>(v)]; }
std::string_view to_string(Domain v) { return kDomains[static_cast<std::size_t>(v)]; }
std::string_view to_string(ReviewState v) { return kStates[static_cast<std::size_t>(v)]; }
std::string_view to_string(TestStatus v) { return kStatuses[static_cast<std::size_t>(v)]; }
std::string_view to_string(RelKind v) { return kRelKinds[static_cast<std::size_t>(v)]; }

std::optional<ItemKind> parse_item_kind(std::string_view s) { return lookup<ItemKind>(kKinds, s); }
std::optional<Domain> parse_domain(std::string_view s) { return lookup<Domain>(kDomains, s); }
std::optional<ReviewState> parse_review_state(std::string_view s) { return lookup<ReviewState>(kStates, s); }
std::optional<TestStatus> parse_test_status(std::string_view s) { return lookup<TestStatus>(kStatuses, s); }
std::optional<RelKind> parse_rel_kind(std::string_view s) { return lookup<RelKind>(kRelKinds, s); }

bool is_legal_transition(ReviewState from, ReviewState to) {
    using S = ReviewState;
    return (from == S::draft && to == S::in_review) || (from == S::in_review && to == S::approved) ||
           (from == S::in_review && to == S::draft);
}

}  // namespace reqflow::rmt
