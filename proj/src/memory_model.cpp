#include "reqflow/memory_model.hpp"

#include "reqflow/error.hpp"

namespace reqflow::dut {

std::string_view to_string(PowerMode m) {
    switch (m) {
        case PowerMode::active: return "active";
        case PowerMode::retention: return "retention";
        case PowerMode::shutdown: return "shutdown";
    }
    return "active";
}

std::string_view to_string(Op op) {
    switch (op) {
        case Op::read: return "read";
        case Op::write: return "write";
        case Op::idle: return "idle";
    }
    return "idle";
}

TechParams tech_params(Tech tech) {
    switch (tech) {
        case Tech::sram_hd: return {2, 2};
        case Tech::sram_hs: return {1, 1};
        case Tech::rram: return {3, 5};
    }
    return {};
}

MemoryModel::MemoryModel(const IpConfiguration& cfg)
    : cfg_(cfg), scheme_(ecc::build_ecc(cfg.ecc, cfg.data_width)), tech_(tech_params(cfg.tech)),
      array_(cfg.addr_words, scheme_.encode(0)) {
    if (cfg_.bug_mutations.contains(Mutation::syndrome_swap) &&
        (cfg_.ecc == EccLevel::secded || cfg_.ecc == EccLevel::dected)) {
        scheme_.swap_syndromes(scheme_.column(0), scheme_.column(1));
    }
}

std::vector<std::uint32_t> MemoryModel::beat_addresses(std::uint32_t addr, Burst burst) const {
    const int beats = burst_beats(burst);
    const bool wrap = burst != Burst::single && cfg_.bug_mutations.contains(Mutation::burst_wrap);
    std::vector<std::uint32_t> out;
    out.reserve(beats);
    for (int i = 0; i < beats; ++i) {
        const std::uint32_t next = addr + static_cast<std::uint32_t>(i);
        out.push_back(wrap ? (addr & ~7u) | (next & 7u) : next);
    }
    return out;
}

BusResponse MemoryModel::exec(const Transaction& txn) {
    if (txn.op == Op::idle) return {RespStatus::okay, {}, {}, 0};
    if (!cfg_.ahb_bursts.contains(txn.burst)) return error_response();
    if (mode_ != PowerMode::active) return error_response();

    const auto addrs = beat_addresses(txn.addr, txn.burst);
    for (auto a : addrs)
        if (a >= cfg_.addr_words) return error_response();

    BusResponse resp;
    const auto beats = static_cast<int>(addrs.size());
    if (txn.op == Op::write) {
        if (static_cast<int>(txn.data.size()) != beats) return error_response();
        for (int i = 0; i < beats; ++i) array_[addrs[i]] = scheme_.encode(txn.data[i]);
        counters_.writes += static_cast<std::uint64_t>(beats);
        resp.latency = beats * tech_.write_latency_cycles;
        return resp;
    }

    for (auto a : addrs) {
        const auto r = scheme_.decode(array_[a]);
        resp.data.push_back(r.data);
        resp.ecc_flags.push_back(r.status);
        if (r.status == ecc::DecodeStatus::corrected) ++counters_.corrected;
        if (r.status == ecc::DecodeStatus::detected_uncorrectable) ++counters_.detected;
    }
    counters_.reads += static_cast<std::uint64_t>(beats);
    resp.latency = beats * tech_.read_latency_cycles;
    return resp;
}

bool MemoryModel::set_power_mode(PowerMode mode) {
    if (mode == PowerMode::retention && !cfg_.lp_modes.contains(LpMode::retention)) return false;
    if (mode == PowerMode::shutdown && !cfg_.lp_modes.contains(LpMode::shutdown)) return false;
    if (mode == mode_) return true;

    const PowerMode from = mode_;
    if (mode == PowerMode::shutdown) std::fill(array_.begin(), array_.end(), invalidation_pattern());
    if (from == PowerMode::retention && cfg_.bug_mutations.contains(Mutation::retention_loss)) array_[0] ^= 1u;
    mode_ = mode;
    transitions_.emplace_back(from, mode);
    return true;
}

void MemoryModel::inject_fault(std::uint32_t addr, std::uint64_t flip_mask) {
    if (addr >= cfg_.addr_words) fail(ErrorKind::validation, "fault injection address " + std::to_string(addr) + " out of range");
    array_[addr] ^= flip_mask & scheme_.code_mask();
}

}  // namespace reqflow::dut
