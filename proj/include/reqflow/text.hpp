#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace reqflow {

/// 64-bit FNV-1a over the raw bytes of `s`.
constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex16(std::uint64_t v);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
bool contains_icase(std::string_view haystack, std::string_view needle);

/// Shortest round-trip decimal representation of `v`.
std::string format_double(double v);
std::string format_fixed1(double v);

std::string read_file(const std::string& path);
/// Writes to `<path>.tmp` then renames over `path`.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace reqflow
