#pragma once

#include "reqflow/config.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace reqflow::ecc {

struct Capability {
    int t_correct = 0;
    int t_detect = 0;  // highest error weight that is always detected
};

/// none (0,0), sed (0,1), secded (1,2), dected (2,3).
Capability capability(EccLevel level);

enum class DecodeStatus { ok, corrected, detected_uncorrectable };

std::string_view to_string(DecodeStatus s);

struct DecodeResult {
    DecodeStatus status = DecodeStatus::ok;
    std::uint32_t data = 0;

    bool operator==(const DecodeResult&) const = default;
};

/// Systematic linear block code: data in codeword bits [0, k), check bits in
/// [k, n). The parity-check matrix is held row-wise as n-bit masks.
class EccScheme {
public:
    static constexpr std::uint64_t kUncorrectable = ~std::uint64_t{0};

    EccLevel level() const { return level_; }
    int data_bits() const { return k_; }
    int check_bits() const { return r_; }
    int code_bits() const { return k_ + r_; }
    Capability capability() const { return ecc::capability(level_); }

    std::uint32_t data_mask() const;
    std::uint64_t code_mask() const;

    /// H as r rows of n-bit masks.
    std::span<const std::uint64_t> parity_rows() const { return rows_; }
    /// Column j of H as an r-bit value.
    std::uint32_t column(int j) const;

    std::uint64_t encode(std::uint32_t data) const;
    std::uint32_t syndrome(std::uint64_t codeword) const;
    DecodeResult decode(std::uint64_t codeword) const;

    /// Error pattern stored for `syndrome`, or kUncorrectable.
    std::uint64_t correction(std::uint32_t syndrome) const;
    std::size_t correctable_count() const;

    /// Exchanges two syndrome table entries. Only used to seed the
    /// syndrome_swap bug mutation.
    void swap_syndromes(std::uint32_t a, std::uint32_t b);

private:
    friend EccScheme build_ecc(EccLevel level, int data_bits);

    EccLevel level_ = EccLevel::none;
    int k_ = 0;
    int r_ = 0;
    std::vector<std::uint64_t> rows_;
    std::vector<std::uint32_t> check_of_bit_;  // check bits contributed by each data bit
    std::vector<std::uint64_t> table_;         // indexed by syndrome
};

/// Throws Error(validation) for unsupported (level, k) pairs.
EccScheme build_ecc(EccLevel level, int data_bits);

/// All n-bit patterns of exactly `weight` set bits, ascending.
std::vector<std::uint64_t> patterns_of_weight(int n, int weight);

}  // namespace reqflow::ecc
