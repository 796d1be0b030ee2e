#include "reqflow/ecc_kernels.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace reqflow::ecc {

namespace {

[[maybe_unused]] int resolve_threads(int threads) {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    (void)threads;
    return 1;
#endif
}

bool violates(const EccScheme& scheme, std::uint32_t data, std::uint64_t pattern, DecodeStatus expected, DecodeResult& got) {
    got = scheme.decode(scheme.encode(data) ^ pattern);
    if (got.status != expected) return true;
    return expected != DecodeStatus::detected_uncorrectable && got.data != data;
}

bool earlier(const Violation& a, const Violation& b) {
    return a.sample_index != b.sample_index ? a.sample_index < b.sample_index : a.pattern < b.pattern;
}

void merge_violation(WeightClassResult& into, const Violation& v) {
    if (!into.first || earlier(v, *into.first)) into.first = v;
}

CapabilityReport empty_report(const EccScheme& scheme, std::size_t samples,
                              std::vector<std::vector<std::uint64_t>>& patterns) {
    const Capability cap = scheme.capability();
    CapabilityReport report;
    for (int w = 0; w <= cap.t_correct + cap.t_detect; ++w) {
        WeightClassResult wc;
        wc.weight = w;
        if (expected_status(cap, w)) {
            patterns.push_back(patterns_of_weight(scheme.code_bits(), w));
            wc.cases = patterns.back().size() * samples;
        } else {
            // Above the detection guarantee nothing is claimed: count, don't decode.
            patterns.emplace_back();
            std::uint64_t c = 1;
            for (int i = 0; i < w; ++i) c = c * static_cast<std::uint64_t>(scheme.code_bits() - i) / static_cast<std::uint64_t>(i + 1);
            wc.cases = c * samples;
        }
        report.weights.push_back(wc);
    }
    return report;
}

}  // namespace

std::string Violation::describe() const {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "data 0x%x with error pattern 0x%llx (weight %d): syndrome 0x%x decoded as %s data 0x%x, expected %s",
                  data, static_cast<unsigned long long>(pattern), std::popcount(pattern), syndrome,
                  std::string(to_string(got.status)).c_str(), got.data, std::string(to_string(expected)).c_str());
    return buf;
}

std::uint64_t CapabilityReport::total_cases() const {
    std::uint64_t n = 0;
    for (const auto& w : weights) n += w.cases;
    return n;
}

std::uint64_t CapabilityReport::total_violations() const {
    std::uint64_t n = 0;
    for (const auto& w : weights) n += w.violations;
    return n;
}

std::optional<DecodeStatus> expected_status(Capability cap, int weight) {
    if (weight == 0) return DecodeStatus::ok;
    if (weight <= cap.t_correct) return DecodeStatus::corrected;
    if (weight <= cap.t_detect) return DecodeStatus::detected_uncorrectable;
    return std::nullopt;
}

int min_distance_serial(const EccScheme& scheme) {
    const std::uint64_t count = std::uint64_t{1} << scheme.data_bits();
    int best = scheme.code_bits();
    for (std::uint64_t d = 1; d < count; ++d)
        best = std::min(best, std::popcount(scheme.encode(static_cast<std::uint32_t>(d))));
    return best;
}

int min_distance(const EccScheme& scheme, [[maybe_unused]] int threads) {
    const std::int64_t count = std::int64_t{1} << scheme.data_bits();
    int best = scheme.code_bits();
#pragma omp parallel for num_threads(resolve_threads(threads)) reduction(min : best) schedule(static)
    for (std::int64_t d = 1; d < count; ++d)
        best = std::min(best, std::popcount(scheme.encode(static_cast<std::uint32_t>(d))));
    return best;
}

CapabilityReport scan_capability_serial(const EccScheme& scheme, std::span<const std::uint32_t> samples) {
    std::vector<std::vector<std::uint64_t>> patterns;
    CapabilityReport report = empty_report(scheme, samples.size(), patterns);
    const Capability cap = scheme.capability();
    for (auto& wc : report.weights) {
        const auto claim = expected_status(cap, wc.weight);
        if (!claim) continue;
        const DecodeStatus expected = *claim;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            for (auto pattern : patterns[wc.weight]) {
                DecodeResult got;
                if (!violates(scheme, samples[i], pattern, expected, got)) continue;
                ++wc.violations;
                merge_violation(wc, Violation{i, samples[i], pattern, scheme.syndrome(pattern), got, expected});
            }
        }
    }
    return report;
}

CapabilityReport scan_capability(const EccScheme& scheme, std::span<const std::uint32_t> samples, [[maybe_unused]] int threads) {
    std::vector<std::vector<std::uint64_t>> patterns;
    CapabilityReport report = empty_report(scheme, samples.size(), patterns);
    const Capability cap = scheme.capability();
    const auto n_samples = static_cast<std::int64_t>(samples.size());

    for (auto& wc : report.weights) {
        const auto claim = expected_status(cap, wc.weight);
        if (!claim) continue;
        const DecodeStatus expected = *claim;
        const auto& pats = patterns[wc.weight];
#pragma omp parallel num_threads(resolve_threads(threads))
        {
            WeightClassResult local;
#pragma omp for schedule(dynamic, 4) nowait
            for (std::int64_t i = 0; i < n_samples; ++i) {
                const auto idx = static_cast<std::size_t>(i);
                for (auto pattern : pats) {
                    DecodeResult got;
                    if (!violates(scheme, samples[idx], pattern, expected, got)) continue;
                    ++local.violations;
                    merge_violation(local, Violation{idx, samples[idx], pattern, scheme.syndrome(pattern), got, expected});
                }
            }
#pragma omp critical(reqflow_capability_merge)
            {
                wc.violations += local.violations;
                if (local.first) merge_violation(wc, *local.first);
            }
        }
    }
    return report;
}

std::vector<std::uint32_t> data_samples(int data_bits, std::size_t count, std::uint64_t seed) {
    std::vector<std::uint32_t> out;
    if (data_bits <= 8) {
        for (std::uint32_t d = 0; d < (1u << data_bits); ++d) out.push_back(d);
        return out;
    }
    std::mt19937_64 rng(seed);
    const std::uint64_t mask = data_bits >= 32 ? 0xffffffffULL : (std::uint64_t{1} << data_bits) - 1;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(static_cast<std::uint32_t>(rng() & mask));
    return out;
}

}  // namespace reqflow::ecc
