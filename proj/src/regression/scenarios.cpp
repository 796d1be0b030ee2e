#include "scenarios.hpp"

#include "reqflow/ecc_kernels.hpp"
#include "reqflow/memory_model.hpp"
#include "reqflow/regression/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

namespace reqflow::regression::detail {

namespace {

using dut::BusResponse;
using dut::MemoryModel;
using dut::Op;
using dut::PowerMode;
using dut::RespStatus;
using dut::Transaction;
using ecc::DecodeStatus;

std::string fmt(const char* format, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

std::uint32_t pick(Rng& rng, std::uint32_t n) { return static_cast<std::uint32_t>(rng() % n); }

std::uint32_t data_mask(const IpConfiguration& cfg) {
    return cfg.data_width >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << cfg.data_width) - 1;
}

std::string status_name(DecodeStatus s) { return std::string(ecc::to_string(s)); }

/// Drives a model while keeping a scoreboard of expected word contents and
/// the number of okay read beats (for counter conservation).
class Scoreboard {
public:
    Scoreboard(const IpConfiguration& cfg, Recorder& rec)
        : cfg_(cfg), model_(cfg), shadow_(cfg.addr_words, 0), tech_(dut::tech_params(cfg.tech)), rec_(rec) {}

    MemoryModel& model() { return model_; }
    std::vector<std::uint32_t>& shadow() { return shadow_; }

    static std::vector<std::uint32_t> linear_beats(std::uint32_t addr, Burst burst) {
        std::vector<std::uint32_t> out;
        for (int i = 0; i < burst_beats(burst); ++i) out.push_back(addr + static_cast<std::uint32_t>(i));
        return out;
    }

    bool in_range(std::uint32_t addr, Burst burst) const {
        for (auto a : linear_beats(addr, burst))
            if (a >= cfg_.addr_words) return false;
        return true;
    }

    /// Executes `txn`, checking response legality, latency, side effects and
    /// read data against the scoreboard. Returns the response.
    BusResponse exec(const Transaction& txn, bool expect_ok, std::string_view what) {
        std::vector<std::uint64_t> before;
        if (!expect_ok) before.assign(model_.array().begin(), model_.array().end());
        const BusResponse resp = model_.exec(txn);
        const bool ok = resp.status == RespStatus::okay;
        rec_.check("resp_legal", ok == expect_ok, [&] {
            return fmt("%s %s at 0x%x (%s): got %s, expected %s", std::string(dut::to_string(txn.op)).c_str(),
                       std::string(to_string(txn.burst)).c_str(), txn.addr, std::string(what).c_str(),
                       ok ? "okay" : "error", expect_ok ? "okay" : "error");
        });
        if (!expect_ok) {
            const bool unchanged = std::equal(before.begin(), before.end(), model_.array().begin());
            rec_.check("no_side_effect", unchanged, [&] { return fmt("error response at 0x%x modified the array", txn.addr); });
            return resp;
        }
        if (!ok || txn.op == Op::idle) return resp;

        const auto beats = linear_beats(txn.addr, txn.burst);
        const int per_beat = txn.op == Op::write ? tech_.write_latency_cycles : tech_.read_latency_cycles;
        rec_.check("latency", resp.latency == static_cast<int>(beats.size()) * per_beat, [&] {
            return fmt("latency %d for %zu beats, expected %d", resp.latency, beats.size(),
                       static_cast<int>(beats.size()) * per_beat);
        });

        if (txn.op == Op::write) {
            for (std::size_t i = 0; i < beats.size(); ++i) shadow_[beats[i]] = txn.data[i] & data_mask(cfg_);
            return resp;
        }
        read_beats_ += beats.size();
        const bool count_ok = resp.data.size() == beats.size() && resp.ecc_flags.size() == beats.size();
        rec_.check("beat_count", count_ok, [&] { return fmt("read returned %zu beats, expected %zu", resp.data.size(), beats.size()); });
        if (!count_ok) return resp;
        for (std::size_t i = 0; i < beats.size(); ++i) {
            rec_.check("raw_compare", resp.data[i] == shadow_[beats[i]], [&] {
                return fmt("read 0x%x returned 0x%x, expected 0x%x", beats[i], resp.data[i], shadow_[beats[i]]);
            });
            rec_.check("ecc_flag", resp.ecc_flags[i] == DecodeStatus::ok, [&] {
                return fmt("read 0x%x flagged %s without an injected fault", beats[i], status_name(resp.ecc_flags[i]).c_str());
            });
        }
        return resp;
    }

    BusResponse write(std::uint32_t addr, Burst burst, std::vector<std::uint32_t> data, std::string_view what = "write") {
        return exec({Op::write, addr, burst, std::move(data)}, in_range(addr, burst), what);
    }

    BusResponse read(std::uint32_t addr, Burst burst, std::string_view what = "read") {
        return exec({Op::read, addr, burst, {}}, in_range(addr, burst), what);
    }

    void raw_read_beats(std::size_t n) { read_beats_ += n; }

    void check_counters() {
        rec_.check("counters", model_.counters().reads == read_beats_, [&] {
            return fmt("reads counter %llu, okay read beats %zu", static_cast<unsigned long long>(model_.counters().reads), read_beats_);
        });
    }

    std::vector<std::uint32_t> random_data(Rng& rng, int beats) const {
        std::vector<std::uint32_t> out;
        for (int i = 0; i < beats; ++i) out.push_back(static_cast<std::uint32_t>(rng()) & data_mask(cfg_));
        return out;
    }

private:
    const IpConfiguration& cfg_;
    MemoryModel model_;
    std::vector<std::uint32_t> shadow_;
    dut::TechParams tech_;
    Recorder& rec_;
    std::size_t read_beats_ = 0;
};

std::vector<Burst> bursts_of(const IpConfiguration& cfg) { return {cfg.ahb_bursts.begin(), cfg.ahb_bursts.end()}; }

}  // namespace

RunResult Recorder::finish(std::uint32_t run_index, std::uint64_t seed) const {
    RunResult r;
    r.test = test_;
    r.run_index = run_index;
    r.seed = seed;
    r.cases = cases_;
    for (const auto& [name, ok] : checks_) {
        r.checks.push_back({entity_check(test_, name), ok});
        if (!ok) r.passed = false;
    }
    r.bin_hits.assign(hits_.begin(), hits_.end());
    if (!r.passed) {
        r.failure_log = log_;
        if (failures_ > kMaxLogLines) r.failure_log += "... " + std::to_string(failures_ - kMaxLogLines) + " more\n";
    }
    return r;
}

void random_rw(const IpConfiguration& cfg, Rng& rng, Recorder& rec) {
    constexpr int kTransactions = 96;
    Scoreboard sb(cfg, rec);
    const auto bursts = bursts_of(cfg);
    for (int i = 0; i < kTransactions; ++i) {
        const std::uint32_t roll = pick(rng, 20);
        const Op op = roll < 2 ? Op::idle : (roll < 11 ? Op::read : Op::write);
        const Burst burst = bursts[pick(rng, static_cast<std::uint32_t>(bursts.size()))];
        const std::uint32_t addr = pick(rng, 10) == 0 ? cfg.addr_words - 1 - pick(rng, 2) : pick(rng, cfg.addr_words);
        rec.add_cases(1);
        rec.hit("op", std::string(dut::to_string(op)));
        if (op == Op::idle) {
            sb.exec({Op::idle, addr, burst, {}}, true, "idle");
            continue;
        }
        rec.hit("burst", std::string(to_string(burst)));
        if (sb.in_range(addr, burst)) {
            static constexpr const char* kRegions[] = {"low", "mid", "high"};
            rec.hit("region", kRegions[std::min<std::uint64_t>(2, std::uint64_t{addr} * 3 / cfg.addr_words)]);
        }
        if (op == Op::write) {
            sb.write(addr, burst, sb.random_data(rng, burst_beats(burst)));
        } else {
            sb.read(addr, burst);
        }
    }
    sb.check_counters();
}

void burst_rw(const IpConfiguration& cfg, Rng& rng, Recorder& rec) {
    constexpr int kRandomStarts = 4;
    Scoreboard sb(cfg, rec);
    for (Burst burst : bursts_of(cfg)) {
        const auto beats = static_cast<std::uint32_t>(burst_beats(burst));
        std::vector<std::uint32_t> starts{0, cfg.addr_words - beats};
        if (beats > 1) starts.push_back(8 - beats / 2);  // straddles the first 8-word boundary
        for (int i = 0; i < kRandomStarts; ++i) starts.push_back(pick(rng, cfg.addr_words - beats + 1));

        for (auto start : starts) {
            rec.add_cases(1);
            rec.hit("burst", std::string(to_string(burst)));
            if (start == 0) rec.hit("edge", "first_word");
            if (start + beats == cfg.addr_words) rec.hit("edge", "last_word");
            if (start / 8 != (start + beats - 1) / 8) rec.hit("edge", "crossing");
            sb.write(start, burst, sb.random_data(rng, static_cast<int>(beats)), "burst write");
            sb.read(start, burst, "burst read-back");
            for (std::uint32_t a = start; a < start + beats; ++a) sb.read(a, Burst::single, "single-beat read-back");
        }

        rec.add_cases(1);
        const std::uint32_t beyond = cfg.addr_words - beats + 1;
        sb.write(beyond, burst, sb.random_data(rng, static_cast<int>(beats)), "out-of-range write");
        sb.read(beyond, burst, "out-of-range read");
        rec.hit("edge", "out_of_range");
    }
    sb.check_counters();
}

void power_cycle(const IpConfiguration& cfg, Rng& rng, Recorder& rec) {
    Scoreboard sb(cfg, rec);
    MemoryModel& m = sb.model();
    const ecc::EccScheme reference = ecc::build_ecc(cfg.ecc, cfg.data_width);
    const ecc::DecodeResult after_shutdown = reference.decode(reference.code_mask());

    std::vector<std::uint32_t> sample{0, cfg.addr_words - 1};
    for (int i = 0; i < 6; ++i) sample.push_back(pick(rng, cfg.addr_words));
    std::sort(sample.begin(), sample.end());
    sample.erase(std::unique(sample.begin(), sample.end()), sample.end());
    auto fill = [&] {
        for (auto a : sample) sb.write(a, Burst::single, sb.random_data(rng, 1), "fill");
    };
    fill();

    if (cfg.lp_modes.empty()) {
        rec.add_cases(1);
        rec.hit("transition", "stay_active");
        for (auto a : sample) sb.read(a, Burst::single, "active read-back");
    }

    std::vector<LpMode> modes(cfg.lp_modes.begin(), cfg.lp_modes.end());
    for (int rep = 0; rep < 3 && !modes.empty(); ++rep) {
        std::shuffle(modes.begin(), modes.end(), rng);
        for (LpMode mode : modes) {
            rec.add_cases(1);
            const PowerMode pm = mode == LpMode::retention ? PowerMode::retention : PowerMode::shutdown;
            const std::string name(to_string(mode));
            rec.check("mode_accept", m.set_power_mode(pm), [&] { return "entering " + name + " was rejected"; });
            rec.hit("transition", "enter_" + name);

            const std::uint32_t probe = sample[pick(rng, static_cast<std::uint32_t>(sample.size()))];
            sb.exec({Op::read, probe, Burst::single, {}}, false, "read during " + name);
            sb.exec({Op::write, probe, Burst::single, sb.random_data(rng, 1)}, false, "write during " + name);
            rec.hit("access", "blocked");

            rec.check("mode_accept", m.set_power_mode(PowerMode::active), [&] { return "leaving " + name + " was rejected"; });
            rec.hit("transition", "exit_" + name);

            if (pm == PowerMode::retention) {
                for (auto a : sample) sb.read(a, Burst::single, "read after retention");
                continue;
            }
            for (auto a : sample) {
                const auto resp = m.exec({Op::read, a, Burst::single, {}});
                sb.raw_read_beats(resp.status == RespStatus::okay ? resp.data.size() : 0);
                const bool ok = resp.status == RespStatus::okay && resp.ecc_flags.size() == 1 &&
                                resp.ecc_flags[0] == after_shutdown.status &&
                                (after_shutdown.status == DecodeStatus::detected_uncorrectable || resp.data[0] == after_shutdown.data);
                rec.check("shutdown_invalidate", ok, [&] {
                    return fmt("word 0x%x after shutdown: expected %s 0x%x", a, status_name(after_shutdown.status).c_str(),
                               after_shutdown.data);
                });
            }
            fill();
        }
    }

    for (LpMode mode : {LpMode::retention, LpMode::shutdown}) {
        if (cfg.lp_modes.contains(mode)) continue;
        rec.add_cases(1);
        const PowerMode pm = mode == LpMode::retention ? PowerMode::retention : PowerMode::shutdown;
        const bool rejected = !m.set_power_mode(pm) && m.power_mode() == PowerMode::active;
        rec.check("mode_reject", rejected, [&] { return "unconfigured mode " + std::string(to_string(mode)) + " was accepted"; });
        rec.hit("request", "rejected");
    }
    sb.check_counters();
}

void fault_sweep(const IpConfiguration& cfg, Rng& rng, Recorder& rec) {
    constexpr int kInjections = 48;
    Scoreboard sb(cfg, rec);
    MemoryModel& m = sb.model();
    const ecc::Capability cap = ecc::capability(cfg.ecc);
    const int n = m.scheme().code_bits();
    const int max_w = std::max(1, cap.t_detect);

    for (int i = 0; i < kInjections; ++i) {
        rec.add_cases(1);
        const std::uint32_t addr = pick(rng, cfg.addr_words);
        const std::uint32_t data = sb.random_data(rng, 1)[0];
        sb.write(addr, Burst::single, {data}, "pre-fault write");

        const int w = 1 + static_cast<int>(pick(rng, static_cast<std::uint32_t>(max_w)));
        std::vector<int> bits(static_cast<std::size_t>(n));
        for (int b = 0; b < n; ++b) bits[static_cast<std::size_t>(b)] = b;
        std::shuffle(bits.begin(), bits.end(), rng);
        std::uint64_t pattern = 0;
        for (int b = 0; b < w; ++b) pattern |= std::uint64_t{1} << bits[static_cast<std::size_t>(b)];
        m.inject_fault(addr, pattern);

        const auto resp = m.exec({Op::read, addr, Burst::single, {}});
        sb.raw_read_beats(resp.status == RespStatus::okay ? 1 : 0);
        if (!rec.check("resp_legal", resp.status == RespStatus::okay && resp.data.size() == 1,
                       [&] { return fmt("read 0x%x after fault injection returned an error", addr); })) {
            continue;
        }

        const auto expected = ecc::expected_status(cap, w);
        const DecodeStatus want = expected.value_or(DecodeStatus::ok);
        const DecodeStatus got = resp.ecc_flags[0];
        rec.check("ecc_flag", got == want, [&] {
            return fmt("weight-%d fault 0x%llx at 0x%x flagged %s, expected %s", w, static_cast<unsigned long long>(pattern), addr,
                       status_name(got).c_str(), status_name(want).c_str());
        });
        if (want != DecodeStatus::detected_uncorrectable) {
            // Without ECC the flipped data bits pass straight through.
            const std::uint32_t expect_data = expected ? data : (data ^ static_cast<std::uint32_t>(pattern)) & data_mask(cfg);
            rec.check("data_restore", resp.data[0] == expect_data, [&] {
                return fmt("weight-%d fault at 0x%x read 0x%x, expected 0x%x", w, addr, resp.data[0], expect_data);
            });
        }
        rec.hit("weight", "w" + std::to_string(w));
        rec.hit("flag", status_name(got));
        sb.write(addr, Burst::single, {data}, "scrub");
    }
    sb.check_counters();
}

void ecc_exhaustive(const IpConfiguration& cfg, std::uint64_t seed, Recorder& rec) {
    constexpr std::size_t kSamples = 64;
    const MemoryModel m(cfg);
    const ecc::EccScheme& scheme = m.scheme();
    const auto samples = ecc::data_samples(cfg.data_width, kSamples, seed);
    const auto report = ecc::scan_capability_serial(scheme, samples);
    for (const auto& wc : report.weights) {
        rec.add_cases(wc.cases);
        rec.check("cap_w" + std::to_string(wc.weight), wc.violations == 0, [&] {
            return fmt("weight %d: %llu of %llu cases violate the capability table; first: ", wc.weight,
                       static_cast<unsigned long long>(wc.violations), static_cast<unsigned long long>(wc.cases)) +
                   wc.first->describe();
        });
        rec.hit("weight", "w" + std::to_string(wc.weight));
    }
    if (cfg.data_width <= 16) {
        const ecc::Capability cap = scheme.capability();
        const int d = ecc::min_distance_serial(scheme);
        rec.check("min_distance", d >= cap.t_correct + cap.t_detect + 1,
                  [&] { return fmt("minimum distance %d below %d", d, cap.t_correct + cap.t_detect + 1); });
    }
}

void bus_decode_exhaustive(const IpConfiguration& cfg, Recorder& rec) {
    MemoryModel m(cfg);
    const auto tech = dut::tech_params(cfg.tech);
    std::vector<PowerMode> modes{PowerMode::active};
    if (cfg.lp_modes.contains(LpMode::retention)) modes.push_back(PowerMode::retention);
    if (cfg.lp_modes.contains(LpMode::shutdown)) modes.push_back(PowerMode::shutdown);

    std::uint64_t cases = 0;
    for (Op op : {Op::read, Op::write, Op::idle}) {
        for (Burst burst : cfg.ahb_bursts) {
            const auto beats = static_cast<std::uint32_t>(burst_beats(burst));
            const std::pair<const char*, std::uint32_t> classes[] = {
                {"zero", 0},
                {"mid", cfg.addr_words / 2},
                {"last_fit", cfg.addr_words - beats},
                {"straddle", cfg.addr_words - 1},
                {"beyond", cfg.addr_words},
            };
            for (const auto& [cls, addr] : classes) {
                for (PowerMode mode : modes) {
                    ++cases;
                    rec.check("mode_accept", m.set_power_mode(mode), [&] { return "cannot enter " + std::string(dut::to_string(mode)); });
                    const bool fits = std::uint64_t{addr} + beats <= cfg.addr_words;
                    const bool expect_ok = op == Op::idle || (mode == PowerMode::active && fits);
                    Transaction txn{op, addr, burst, {}};
                    if (op == Op::write) txn.data.assign(beats, 0xa5a5a5a5u & data_mask(cfg));

                    const std::vector<std::uint64_t> before(m.array().begin(), m.array().end());
                    const auto resp = m.exec(txn);
                    const bool ok = resp.status == RespStatus::okay;
                    auto where = [&] {
                        return fmt("%s %s addr=%s(0x%x) mode=%s", std::string(dut::to_string(op)).c_str(),
                                   std::string(to_string(burst)).c_str(), cls, addr, std::string(dut::to_string(mode)).c_str());
                    };
                    rec.check("resp_rule", ok == expect_ok, [&] {
                        return where() + ": got " + (ok ? "okay" : "error") + ", expected " + (expect_ok ? "okay" : "error");
                    });
                    if (!ok) {
                        rec.check("no_side_effect", std::equal(before.begin(), before.end(), m.array().begin()),
                                  [&] { return where() + ": error response modified the array"; });
                        rec.check("error_no_data", resp.data.empty(), [&] { return where() + ": error response carried data"; });
                    } else if (expect_ok) {
                        const std::size_t want_beats = op == Op::read ? beats : 0;
                        const int per_beat = op == Op::write ? tech.write_latency_cycles : tech.read_latency_cycles;
                        const int want_latency = op == Op::idle ? 0 : static_cast<int>(beats) * per_beat;
                        rec.check("beat_count", resp.data.size() == want_beats,
                                  [&] { return where() + fmt(": %zu data beats, expected %zu", resp.data.size(), want_beats); });
                        rec.check("latency", resp.latency == want_latency,
                                  [&] { return where() + fmt(": latency %d, expected %d", resp.latency, want_latency); });
                    }
                    rec.hit("op", std::string(dut::to_string(op)));
                    rec.hit("mode", std::string(dut::to_string(mode)));
                    rec.check("mode_accept", m.set_power_mode(PowerMode::active), [&] { return std::string("cannot return to active"); });
                }
            }
        }
    }
    rec.add_cases(cases);
    const std::uint64_t expected = exhaustive_case_count(Scenario::bus_decode_exhaustive, cfg);
    rec.check("case_count", cases == expected, [&] {
        return fmt("enumerated %llu cases, expected %llu", static_cast<unsigned long long>(cases), static_cast<unsigned long long>(expected));
    });
}

}  // namespace reqflow::regression::detail
