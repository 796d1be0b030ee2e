#pragma once

#include "reqflow/config.hpp"
#include "reqflow/regression/types.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>

namespace reqflow::regression::detail {

/// Collects check outcomes, coverage hits and a bounded failure log for one run.
class Recorder {
public:
    explicit Recorder(std::string test) : test_(std::move(test)) {}

    template <typename Detail>
    bool check(const std::string& name, bool ok, Detail&& detail) {
        auto [it, inserted] = checks_.emplace(name, ok);
        if (!inserted) it->second = it->second && ok;
        if (!ok) {
            ++failures_;
            if (failures_ <= kMaxLogLines) log_ += "[" + name + "] " + std::string(detail()) + "\n";
        }
        return ok;
    }

    void hit(const std::string& point, const std::string& bin) { hits_.insert(entity_bin(test_, point, bin)); }
    void add_cases(std::uint64_t n) { cases_ += n; }

    RunResult finish(std::uint32_t run_index, std::uint64_t seed) const;

private:
    static constexpr std::size_t kMaxLogLines = 32;

    std::string test_;
    std::map<std::string, bool> checks_;
    std::set<std::string> hits_;
    std::string log_;
    std::size_t failures_ = 0;
    std::uint64_t cases_ = 0;
};

using Rng = std::mt19937_64;

void random_rw(const IpConfiguration& cfg, Rng& rng, Recorder& rec);
void burst_rw(const IpConfiguration& cfg, Rng& rng, Recorder& rec);
void power_cycle(const IpConfiguration& cfg, Rng& rng, Recorder& rec);
void fault_sweep(const IpConfiguration& cfg, Rng& rng, Recorder& rec);
void ecc_exhaustive(const IpConfiguration& cfg, std::uint64_t seed, Recorder& rec);
void bus_decode_exhaustive(const IpConfiguration& cfg, Recorder& rec);

}  // namespace reqflow::regression::detail
