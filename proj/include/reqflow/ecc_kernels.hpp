#pragma once

// Exhaustive ECC scans. Each kernel has an OpenMP-parallel form and a serial
// reference form; both must produce identical results.

#include "reqflow/ecc.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace reqflow::ecc {

/// Minimum Hamming weight over all nonzero codewords (all 2^k data values).
int min_distance(const EccScheme& scheme, int threads = 0);
int min_distance_serial(const EccScheme& scheme);

struct Violation {
    std::size_t sample_index = 0;
    std::uint32_t data = 0;
    std::uint64_t pattern = 0;
    std::uint32_t syndrome = 0;
    DecodeResult got;
    DecodeStatus expected = DecodeStatus::ok;

    std::string describe() const;
    bool operator==(const Violation&) const = default;
};

struct WeightClassResult {
    int weight = 0;
    std::uint64_t cases = 0;
    std::uint64_t violations = 0;
    std::optional<Violation> first;  // smallest (sample_index, pattern)

    bool operator==(const WeightClassResult&) const = default;
};

/// Per-weight results of checking decode(encode(d) ^ e) against the
/// capability table for every sample d and every pattern e of weight
/// 0..t_correct+t_detect. Weights above t_detect carry no claim; they are
/// counted but never violate.
struct CapabilityReport {
    std::vector<WeightClassResult> weights;

    std::uint64_t total_cases() const;
    std::uint64_t total_violations() const;
    bool operator==(const CapabilityReport&) const = default;
};

/// Expected outcome for an error of weight `w` under `cap`: corrected up to
/// t_correct, detected up to t_detect, nullopt above.
std::optional<DecodeStatus> expected_status(Capability cap, int weight);

CapabilityReport scan_capability(const EccScheme& scheme, std::span<const std::uint32_t> samples, int threads = 0);
CapabilityReport scan_capability_serial(const EccScheme& scheme, std::span<const std::uint32_t> samples);

/// All 2^k values when k <= 8, otherwise `count` values from a seeded stream.
std::vector<std::uint32_t> data_samples(int data_bits, std::size_t count, std::uint64_t seed);

}  // namespace reqflow::ecc
