#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace reqflow {

// Declaration order is the capability order: none < sed < secded < dected.
enum class EccLevel { none, sed, secded, dected };
enum class Tech { sram_hd, sram_hs, rram };
enum class LpMode { retention, shutdown };
enum class Burst { single, incr4, incr8 };
enum class Mutation { syndrome_swap, retention_loss, burst_wrap };

std::string_view to_string(EccLevel v);
std::string_view to_string(Tech v);
std::string_view to_string(LpMode v);
std::string_view to_string(Burst v);
std::string_view to_string(Mutation v);

std::optional<EccLevel> parse_ecc_level(std::string_view s);
std::optional<Tech> parse_tech(std::string_view s);
std::optional<LpMode> parse_lp_mode(std::string_view s);
std::optional<Burst> parse_burst(std::string_view s);
std::optional<Mutation> parse_mutation(std::string_view s);

constexpr int burst_beats(Burst b) noexcept {
    switch (b) {
        case Burst::single: return 1;
        case Burst::incr4: return 4;
        case Burst::incr8: return 8;
    }
    return 1;
}

/// Whether an ECC of `level` can be built over `data_width` data bits.
constexpr bool ecc_supported(EccLevel level, int data_width) noexcept {
    const bool width_ok = data_width == 8 || data_width == 16 || data_width == 32;
    return width_ok && !(level == EccLevel::dected && data_width == 32);
}

struct IpConfiguration {
    std::string ip_name;
    int data_width = 8;
    std::uint32_t addr_words = 16;
    EccLevel ecc = EccLevel::none;
    Tech tech = Tech::sram_hd;
    std::set<LpMode> lp_modes;
    std::set<Burst> ahb_bursts{Burst::single};
    std::set<Mutation> bug_mutations;

    bool operator==(const IpConfiguration&) const = default;
};

/// Parses the line-based `key = value` configuration format.
IpConfiguration parse_config(std::string_view text);

/// Canonical text form: every key, fixed order, sets in enum order.
/// parse_config(canonical_text(c)) == c.
std::string canonical_text(const IpConfiguration& cfg);

/// 16 hex digits of FNV-1a 64 over canonical_text(cfg).
std::string config_tag(const IpConfiguration& cfg);

/// Throws when `cfg` violates a field invariant.
void validate(const IpConfiguration& cfg);

/// One value set per key, enumerated as a cross product in file order.
struct ConfigMatrix {
    struct Axis {
        std::string key;
        std::vector<std::string> values;  // raw value text, sets joined with '+', "{}" for empty
    };
    std::vector<Axis> axes;
};

ConfigMatrix parse_matrix(std::string_view text);

/// Valid configurations of the cross product; combinations rejected by
/// parse_config (e.g. dected at width 32) are dropped.
std::vector<IpConfiguration> expand_matrix(const ConfigMatrix& matrix);

}  // namespace reqflow
