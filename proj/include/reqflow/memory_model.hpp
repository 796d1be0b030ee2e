#pragma once

#include "reqflow/config.hpp"
#include "reqflow/ecc.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace reqflow::dut {

enum class PowerMode { active, retention, shutdown };
enum class Op { read, write, idle };
enum class RespStatus { okay, error };

std::string_view to_string(PowerMode m);
std::string_view to_string(Op op);

struct TechParams {
    int read_latency_cycles = 1;
    int write_latency_cycles = 1;
};

/// sram_hd 2/2, sram_hs 1/1, rram 3/5.
TechParams tech_params(Tech tech);

struct Transaction {
    Op op = Op::idle;
    std::uint32_t addr = 0;
    Burst burst = Burst::single;
    std::vector<std::uint32_t> data;  // one entry per beat for writes
};

struct BusResponse {
    RespStatus status = RespStatus::okay;
    std::vector<std::uint32_t> data;
    std::vector<ecc::DecodeStatus> ecc_flags;
    int latency = 0;
};

struct Counters {
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
    std::uint64_t corrected = 0;
    std::uint64_t detected = 0;
};

/// Transaction-level model of the configurable memory subsystem: bus decode,
/// ECC, array, power modes and optional seeded bugs.
class MemoryModel {
public:
    explicit MemoryModel(const IpConfiguration& cfg);

    BusResponse exec(const Transaction& txn);

    /// Returns false (state unchanged) when `mode` is neither active nor a
    /// configured low-power mode.
    [[nodiscard]] bool set_power_mode(PowerMode mode);

    /// XORs `flip_mask` into the stored codeword. Throws on out-of-range.
    void inject_fault(std::uint32_t addr, std::uint64_t flip_mask);

    /// Word addresses touched by a burst starting at `addr`, as decoded by
    /// this instance (including the burst_wrap bug when seeded).
    std::vector<std::uint32_t> beat_addresses(std::uint32_t addr, Burst burst) const;

    const IpConfiguration& config() const { return cfg_; }
    const ecc::EccScheme& scheme() const { return scheme_; }
    PowerMode power_mode() const { return mode_; }
    const Counters& counters() const { return counters_; }
    std::span<const std::uint64_t> array() const { return array_; }
    const std::vector<std::pair<PowerMode, PowerMode>>& transitions() const { return transitions_; }

    /// Codeword written into every word on shutdown entry.
    std::uint64_t invalidation_pattern() const { return scheme_.code_mask(); }

private:
    BusResponse error_response() const { return {RespStatus::error, {}, {}, 0}; }

    IpConfiguration cfg_;
    ecc::EccScheme scheme_;
    TechParams tech_;
    std::vector<std::uint64_t> array_;
    PowerMode mode_ = PowerMode::active;
    Counters counters_;
    std::vector<std::pair<PowerMode, PowerMode>> transitions_;
};

}  // namespace reqflow::dut
