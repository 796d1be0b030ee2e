#include "reqflow/ecc.hpp"

#include "reqflow/ecc_kernels.hpp"
#include "reqflow/error.hpp"

#include <bit>
#include <optional>

namespace reqflow::ecc {

namespace {

int parity(std::uint64_t v) { return std::popcount(v) & 1; }

struct Columns {
    int r = 0;
    std::vector<std::uint32_t> data;   // k columns
    std::vector<std::uint32_t> check;  // r columns
};

// Standard Hamming columns (non-powers of two, ascending) for the data bits,
// unit check columns, and an overall-parity row over every bit.
Columns secded_columns(int k) {
    int h = 1;
    while ((1 << h) < k + h + 1) ++h;
    Columns c;
    c.r = h + 1;
    const std::uint32_t parity_bit = 1u << h;
    for (std::uint32_t v = 3; static_cast<int>(c.data.size()) < k; ++v)
        if (!std::has_single_bit(v)) c.data.push_back(v | parity_bit);
    for (int i = 0; i < h; ++i) c.check.push_back((1u << i) | parity_bit);
    c.check.push_back(parity_bit);
    return c;
}

// Greedy search: candidates in increasing order, accept iff no set of at most
// five accepted columns sums to zero (minimum distance >= 6).
std::optional<Columns> dected_greedy(int k, int r) {
    const int n = k + r;
    const std::uint32_t space = 1u << r;
    // reach[x] bit w: x is the XOR of some w distinct accepted columns.
    std::vector<std::uint8_t> reach(space, 0);
    reach[0] = 1;
    std::vector<std::uint32_t> accepted;
    for (std::uint32_t cand = 1; cand < space && static_cast<int>(accepted.size()) < n; ++cand) {
        if ((reach[cand] & 0x1f) != 0) continue;
        for (int w = 4; w >= 1; --w) {
            const std::uint8_t from = static_cast<std::uint8_t>(1u << (w - 1));
            const std::uint8_t to = static_cast<std::uint8_t>(1u << w);
            for (std::uint32_t x = 0; x < space; ++x)
                if (reach[x] & from) reach[x ^ cand] |= to;
        }
        accepted.push_back(cand);
    }
    if (static_cast<int>(accepted.size()) < n) return std::nullopt;

    Columns c;
    c.r = r;
    std::vector<bool> unit_seen(r, false);
    for (auto col : accepted) {
        if (std::has_single_bit(col)) {
            unit_seen[std::countr_zero(col)] = true;
        } else {
            c.data.push_back(col);
        }
    }
    for (bool s : unit_seen)
        if (!s) return std::nullopt;
    if (static_cast<int>(c.data.size()) != k) return std::nullopt;
    for (int i = 0; i < r; ++i) c.check.push_back(1u << i);
    return c;
}

// Inverts an r x r matrix over GF(2); rows are r-bit masks.
std::vector<std::uint32_t> invert_gf2(std::vector<std::uint32_t> m) {
    const int r = static_cast<int>(m.size());
    std::vector<std::uint32_t> inv(r);
    for (int i = 0; i < r; ++i) inv[i] = 1u << i;
    for (int col = 0; col < r; ++col) {
        int pivot = -1;
        for (int row = col; row < r; ++row)
            if (m[row] >> col & 1u) {
                pivot = row;
                break;
            }
        if (pivot < 0) fail(ErrorKind::validation, "check columns of parity-check matrix are singular");
        std::swap(m[col], m[pivot]);
        std::swap(inv[col], inv[pivot]);
        for (int row = 0; row < r; ++row) {
            if (row != col && (m[row] >> col & 1u)) {
                m[row] ^= m[col];
                inv[row] ^= inv[col];
            }
        }
    }
    return inv;
}

}  // namespace

Capability capability(EccLevel level) {
    switch (level) {
        case EccLevel::none: return {0, 0};
        case EccLevel::sed: return {0, 1};
        case EccLevel::secded: return {1, 2};
        case EccLevel::dected: return {2, 3};
    }
    return {};
}

std::string_view to_string(DecodeStatus s) {
    switch (s) {
        case DecodeStatus::ok: return "ok";
        case DecodeStatus::corrected: return "corrected";
        case DecodeStatus::detected_uncorrectable: return "detected_uncorrectable";
    }
    return "ok";
}

std::uint32_t EccScheme::data_mask() const {
    return k_ >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << k_) - 1;
}

std::uint64_t EccScheme::code_mask() const { return (std::uint64_t{1} << code_bits()) - 1; }

std::uint32_t EccScheme::column(int j) const {
    std::uint32_t c = 0;
    for (int i = 0; i < r_; ++i)
        if (rows_[i] >> j & 1u) c |= 1u << i;
    return c;
}

std::uint64_t EccScheme::encode(std::uint32_t data) const {
    data &= data_mask();
    std::uint32_t check = 0;
    for (std::uint32_t d = data; d != 0; d &= d - 1) check ^= check_of_bit_[std::countr_zero(d)];
    return std::uint64_t{data} | (std::uint64_t{check} << k_);
}

std::uint32_t EccScheme::syndrome(std::uint64_t codeword) const {
    std::uint32_t s = 0;
    for (int i = 0; i < r_; ++i) s |= static_cast<std::uint32_t>(parity(rows_[i] & codeword)) << i;
    return s;
}

DecodeResult EccScheme::decode(std::uint64_t codeword) const {
    codeword &= code_mask();
    const std::uint32_t s = syndrome(codeword);
    if (s == 0) return {DecodeStatus::ok, static_cast<std::uint32_t>(codeword) & data_mask()};
    const std::uint64_t pattern = table_[s];
    if (pattern == kUncorrectable)
        return {DecodeStatus::detected_uncorrectable, static_cast<std::uint32_t>(codeword) & data_mask()};
    return {DecodeStatus::corrected, static_cast<std::uint32_t>(codeword ^ pattern) & data_mask()};
}

std::uint64_t EccScheme::correction(std::uint32_t s) const {
    return s < table_.size() ? table_[s] : kUncorrectable;
}

std::size_t EccScheme::correctable_count() const {
    std::size_t n = 0;
    for (auto p : table_)
        if (p != kUncorrectable) ++n;
    return n;
}

void EccScheme::swap_syndromes(std::uint32_t a, std::uint32_t b) { std::swap(table_.at(a), table_.at(b)); }

std::vector<std::uint64_t> patterns_of_weight(int n, int weight) {
    std::vector<std::uint64_t> out;
    if (weight < 0 || weight > n) return out;
    if (weight == 0) return {0};
    // Gosper's hack enumerates same-popcount values in increasing order.
    std::uint64_t v = (std::uint64_t{1} << weight) - 1;
    const std::uint64_t limit = std::uint64_t{1} << n;
    while (v < limit) {
        out.push_back(v);
        const std::uint64_t c = v & (~v + 1);
        const std::uint64_t r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    return out;
}

EccScheme build_ecc(EccLevel level, int data_bits) {
    if (!ecc_supported(level, data_bits))
        fail(ErrorKind::validation, "unsupported ECC: level " + std::string(to_string(level)) + " with " +
                                        std::to_string(data_bits) + " data bits");
    EccScheme s;
    s.level_ = level;
    s.k_ = data_bits;

    Columns cols;
    switch (level) {
        case EccLevel::none:
            cols.r = 0;
            cols.data.assign(data_bits, 0);
            break;
        case EccLevel::sed:
            cols.r = 1;
            cols.data.assign(data_bits, 1);
            cols.check = {1};
            break;
        case EccLevel::secded:
            cols = secded_columns(data_bits);
            break;
        case EccLevel::dected: {
            std::optional<Columns> found;
            for (int r = 1; r <= 20 && !found; ++r) found = dected_greedy(data_bits, r);
            if (!found) fail(ErrorKind::validation, "DECTED column search did not complete");
            cols = std::move(*found);
            break;
        }
    }

    s.r_ = cols.r;
    const int n = s.k_ + s.r_;
    s.rows_.assign(s.r_, 0);
    for (int i = 0; i < s.r_; ++i) {
        for (int j = 0; j < s.k_; ++j)
            if (cols.data[j] >> i & 1u) s.rows_[i] |= std::uint64_t{1} << j;
        for (int j = 0; j < s.r_; ++j)
            if (cols.check[j] >> i & 1u) s.rows_[i] |= std::uint64_t{1} << (s.k_ + j);
    }

    // Check bits c solve B c = A d, with B the check-column block of H.
    s.check_of_bit_.assign(s.k_, 0);
    if (s.r_ > 0) {
        std::vector<std::uint32_t> b_rows(s.r_, 0);
        for (int i = 0; i < s.r_; ++i)
            for (int j = 0; j < s.r_; ++j)
                if (cols.check[j] >> i & 1u) b_rows[i] |= 1u << j;
        const auto b_inv = invert_gf2(b_rows);
        for (int j = 0; j < s.k_; ++j) {
            std::uint32_t c = 0;
            for (int i = 0; i < s.r_; ++i) c |= static_cast<std::uint32_t>(std::popcount(b_inv[i] & cols.data[j]) & 1) << i;
            s.check_of_bit_[j] = c;
        }
    }

    s.table_.assign(std::size_t{1} << s.r_, EccScheme::kUncorrectable);
    const Capability cap = capability(level);
    for (int w = 0; w <= cap.t_correct; ++w) {
        for (auto pattern : patterns_of_weight(n, w)) {
            const std::uint32_t syn = s.syndrome(pattern);
            if (s.table_[syn] != EccScheme::kUncorrectable)
                fail(ErrorKind::validation, "syndrome collision while building the correction table");
            s.table_[syn] = pattern;
        }
    }

    if (data_bits <= 16) {
        const int d = min_distance_serial(s);
        if (d < cap.t_correct + cap.t_detect + 1)
            fail(ErrorKind::validation, "constructed code has minimum distance " + std::to_string(d) + ", below its capability");
    }
    return s;
}

}  // namespace reqflow::ecc
