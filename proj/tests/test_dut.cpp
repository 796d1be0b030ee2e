#include "reqflow/error.hpp"
#include "reqflow/memory_model.hpp"
#include "reqflow/ecc.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <bit>

using namespace reqflow;
using namespace reqflow::dut;
using ecc::DecodeStatus;

namespace {

std::vector<std::uint64_t> snapshot(const MemoryModel& m) { return {m.array().begin(), m.array().end()}; }

}  // namespace

TEST_SUITE("dut") {

TEST_CASE("write then read round-trips with per-technology latency") {
    struct Lat {
        Tech tech;
        int rd, wr;
    };
    for (const auto& t : {Lat{Tech::sram_hd, 2, 2}, Lat{Tech::sram_hs, 1, 1}, Lat{Tech::rram, 3, 5}}) {
        auto cfg = testing::full_config();
        cfg.tech = t.tech;
        MemoryModel m(cfg);
        const auto w = m.exec({Op::write, 12, Burst::incr4, {1, 2, 3, 0xffff}});
        CHECK(w.status == RespStatus::okay);
        CHECK(w.latency == 4 * t.wr);
        const auto r = m.exec({Op::read, 12, Burst::incr4, {}});
        CHECK(r.status == RespStatus::okay);
        CHECK(r.data == std::vector<std::uint32_t>{1, 2, 3, 0xffff});
        CHECK(std::all_of(r.ecc_flags.begin(), r.ecc_flags.end(), [](auto f) { return f == DecodeStatus::ok; }));
        CHECK(r.latency == 4 * t.rd);
    }
}

TEST_CASE("reset contents decode to zero") {
    MemoryModel m(testing::full_config(EccLevel::dected, 8));
    const auto r = m.exec({Op::read, 0, Burst::incr8, {}});
    CHECK(r.data == std::vector<std::uint32_t>(8, 0));
}

TEST_CASE("range and decode errors leave the array untouched and carry no data") {
    MemoryModel m(testing::full_config());
    const auto words = m.config().addr_words;
    REQUIRE(m.exec({Op::write, 3, Burst::single, {0x1234}}).status == RespStatus::okay);
    const auto before = snapshot(m);

    auto r = m.exec({Op::read, words, Burst::single, {}});
    CHECK(r.status == RespStatus::error);
    CHECK(r.data.empty());
    r = m.exec({Op::write, words - 2, Burst::incr4, {1, 2, 3, 4}});
    CHECK(r.status == RespStatus::error);
    CHECK(r.data.empty());
    r = m.exec({Op::write, 0, Burst::incr4, {1, 2}});  // wrong beat count
    CHECK(r.status == RespStatus::error);
    CHECK(snapshot(m) == before);

    MemoryModel single_only(testing::make_config(EccLevel::secded, 16));
    CHECK(single_only.exec({Op::read, 0, Burst::incr4, {}}).status == RespStatus::error);
}

TEST_CASE("idle completes okay with zero beats") {
    MemoryModel m(testing::full_config());
    const auto r = m.exec({Op::idle, 5000, Burst::single, {}});
    CHECK(r.status == RespStatus::okay);
    CHECK(r.data.empty());
    CHECK(r.latency == 0);
}

TEST_CASE("retention blocks access and keeps contents") {
    MemoryModel m(testing::full_config());
    REQUIRE(m.exec({Op::write, 7, Burst::single, {0xa5a5}}).status == RespStatus::okay);
    REQUIRE(m.set_power_mode(PowerMode::retention));
    const auto before = snapshot(m);
    CHECK(m.exec({Op::read, 7, Burst::single, {}}).status == RespStatus::error);
    CHECK(m.exec({Op::write, 7, Burst::single, {1}}).status == RespStatus::error);
    CHECK(snapshot(m) == before);
    REQUIRE(m.set_power_mode(PowerMode::active));
    const auto r = m.exec({Op::read, 7, Burst::single, {}});
    CHECK(r.data == std::vector<std::uint32_t>{0xa5a5});
    CHECK(r.ecc_flags == std::vector<DecodeStatus>{DecodeStatus::ok});
    REQUIRE(m.transitions().size() == 2u);
    CHECK(m.transitions()[0] == std::pair{PowerMode::active, PowerMode::retention});
}

TEST_CASE("shutdown invalidates with the all-ones pattern") {
    MemoryModel m(testing::full_config(EccLevel::secded, 8));
    REQUIRE(m.exec({Op::write, 1, Burst::single, {0x5a}}).status == RespStatus::okay);
    REQUIRE(m.set_power_mode(PowerMode::shutdown));
    CHECK(m.exec({Op::read, 1, Burst::single, {}}).status == RespStatus::error);
    REQUIRE(m.set_power_mode(PowerMode::active));
    for (auto w : m.array()) CHECK(w == (std::uint64_t{1} << 13) - 1);

    // Oracle: the syndrome of the all-ones word is the XOR of every column;
    // zero reads clean, a column match reads corrected, anything else is flagged.
    const auto scheme = ecc::build_ecc(EccLevel::secded, 8);
    std::uint32_t syn = 0;
    for (int j = 0; j < scheme.code_bits(); ++j) syn ^= scheme.column(j);
    DecodeStatus expected = DecodeStatus::detected_uncorrectable;
    if (syn == 0) expected = DecodeStatus::ok;
    for (int j = 0; j < scheme.code_bits(); ++j)
        if (syn != 0 && scheme.column(j) == syn) expected = DecodeStatus::corrected;
    const auto r = m.exec({Op::read, 1, Burst::single, {}});
    CHECK(r.ecc_flags == std::vector<DecodeStatus>{expected});
}

TEST_CASE("unconfigured power modes are rejected") {
    MemoryModel m(testing::make_config(EccLevel::sed, 8, Tech::sram_hd, {LpMode::retention}));
    CHECK_FALSE(m.set_power_mode(PowerMode::shutdown));
    CHECK(m.power_mode() == PowerMode::active);
    CHECK(m.transitions().empty());
    CHECK(m.set_power_mode(PowerMode::retention));
}

TEST_CASE("fault injection") {
    MemoryModel m(testing::full_config(EccLevel::dected, 16));
    REQUIRE(m.exec({Op::write, 9, Burst::single, {0xbeef}}).status == RespStatus::okay);
    const auto before = snapshot(m);
    const auto counters = m.counters();
    m.inject_fault(9, 0);
    CHECK(snapshot(m) == before);

    m.inject_fault(9, 0b100);
    CHECK(m.counters().reads == counters.reads);
    auto r = m.exec({Op::read, 9, Burst::single, {}});
    CHECK(r.ecc_flags[0] == DecodeStatus::corrected);
    CHECK(r.data[0] == 0xbeefu);
    CHECK(m.counters().corrected == 1u);

    m.inject_fault(9, 0b100);  // undo
    m.inject_fault(9, 0b1000000000000000000011);
    r = m.exec({Op::read, 9, Burst::single, {}});
    CHECK(r.ecc_flags[0] == DecodeStatus::detected_uncorrectable);
    CHECK(m.counters().detected == 1u);

    CHECK_THROWS_AS(m.inject_fault(m.config().addr_words, 1), Error);
}

TEST_CASE("secded single fault is corrected") {
    MemoryModel m(testing::full_config(EccLevel::secded, 8));
    REQUIRE(m.exec({Op::write, 2, Burst::single, {0x3c}}).status == RespStatus::okay);
    m.inject_fault(2, 1u << 11);
    const auto r = m.exec({Op::read, 2, Burst::single, {}});
    CHECK(r.ecc_flags[0] == DecodeStatus::corrected);
    CHECK(r.data[0] == 0x3cu);
}

TEST_CASE("read counter equals okay read beats") {
    MemoryModel m(testing::full_config());
    std::uint64_t beats = 0;
    const Transaction txns[] = {{Op::read, 0, Burst::incr8, {}}, {Op::read, 60, Burst::incr8, {}},
                                {Op::read, 63, Burst::single, {}}, {Op::read, 64, Burst::single, {}},
                                {Op::idle, 0, Burst::single, {}}, {Op::read, 8, Burst::incr4, {}}};
    for (const auto& t : txns) {
        const auto r = m.exec(t);
        if (r.status == RespStatus::okay && t.op == Op::read) beats += r.data.size();
    }
    CHECK(beats == 13u);
    CHECK(m.counters().reads == beats);
}

TEST_CASE("burst_wrap mutation changes beat addresses only for incrementing bursts") {
    auto cfg = testing::full_config();
    MemoryModel clean(cfg);
    cfg.bug_mutations = {Mutation::burst_wrap};
    MemoryModel buggy(cfg);
    CHECK(clean.beat_addresses(6, Burst::incr4) == std::vector<std::uint32_t>{6, 7, 8, 9});
    CHECK(buggy.beat_addresses(6, Burst::incr4) == std::vector<std::uint32_t>{6, 7, 0, 1});
    CHECK(buggy.beat_addresses(8, Burst::incr8) == clean.beat_addresses(8, Burst::incr8));
    CHECK(buggy.beat_addresses(13, Burst::single) == std::vector<std::uint32_t>{13});
}

TEST_CASE("retention_loss mutation flips one bit of word 0") {
    auto cfg = testing::full_config(EccLevel::none, 8);
    cfg.bug_mutations = {Mutation::retention_loss};
    MemoryModel m(cfg);
    REQUIRE(m.exec({Op::write, 0, Burst::single, {0x80}}).status == RespStatus::okay);
    REQUIRE(m.set_power_mode(PowerMode::retention));
    REQUIRE(m.set_power_mode(PowerMode::active));
    CHECK(std::popcount(m.array()[0] ^ 0x80) == 1);
}

TEST_CASE("syndrome_swap mutation miscorrects a single-bit fault") {
    auto cfg = testing::full_config(EccLevel::secded, 8);
    cfg.bug_mutations = {Mutation::syndrome_swap};
    MemoryModel m(cfg);
    REQUIRE(m.exec({Op::write, 0, Burst::single, {0}}).status == RespStatus::okay);
    m.inject_fault(0, 1);
    const auto r = m.exec({Op::read, 0, Burst::single, {}});
    CHECK(r.data[0] != 0u);

    cfg.ecc = EccLevel::sed;  // nothing to swap without a correction table
    MemoryModel parity(cfg);
    parity.inject_fault(0, 1);
    CHECK(parity.exec({Op::read, 0, Burst::single, {}}).ecc_flags[0] == DecodeStatus::detected_uncorrectable);
}

}  // TEST_SUITE
