#include "reqflow/error.hpp"
#include "reqflow/regression/generate.hpp"
#include "reqflow/regression/runner.hpp"
#include "reqflow/regression/session.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

using namespace reqflow;
using namespace reqflow::regression;
using rmt::Domain;

namespace {

std::vector<TestcaseRef> sample_testcases() {
    return {
        {"X-TC-001", "Random read/write traffic", Domain::simulation},
        {"X-TC-002", "Burst sequencing", Domain::simulation},
        {"X-TC-003", "Power mode entry and exit", Domain::simulation},
        {"X-TC-004", "Fault injection sweep", Domain::simulation},
        {"X-TC-005", "ECC encode/decode proof", Domain::formal},
        {"X-TC-006", "Bus decode proof", Domain::formal},
    };
}

GeneratedRegression generate(const IpConfiguration& cfg, std::uint64_t seed = 7) {
    const auto tcs = sample_testcases();
    return generate_tests(tcs, cfg, seed, "regression");
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    return k == 0 ? 1 : choose(n - 1, k - 1) * n / k;
}

std::size_t parse_error_offset(std::string_view text) {
    try {
        parse_session(text);
    } catch (const ParseError& e) {
        return e.position();
    }
    FAIL("expected a parse error");
    return 0;
}

}  // namespace

TEST_SUITE("regression") {

TEST_CASE("session file round-trip") {
    SessionSpec spec;
    spec.name = "nightly";
    spec.seed = 18446744073709551615ull;
    spec.tests = {{"b", "formal", Runner::exhaustive, 1}, {"a", "sim", Runner::sim, 4}};
    const std::string text = write_session(spec);
    CHECK(parse_session(text) == spec);
    CHECK(write_session(parse_session(text)) == text);
}

TEST_CASE("session parse errors carry the offset of the bad token") {
    CHECK(parse_error_offset("session \"s\" { seed = 1; bogus }") == 24);
    // A missing seed is reported where the session ends.
    CHECK(parse_error_offset("session \"s\" { }") == 15);
    CHECK(parse_error_offset("session \"s\" { seed = 1; group \"x\" { } }") == 30);
    CHECK(parse_error_offset("session \"s\" { seed = 1; group \"sim\" { test \"a\" { runner = fast; count = 1; } } }") == 58);
    CHECK(parse_error_offset("session \"s") == 8);
    CHECK(parse_error_offset("session \"s\" { seed = 99999999999999999999; }") == 21);
}

TEST_CASE("generation maps titles to scenarios") {
    const auto cfg = testing::full_config();
    const auto g = generate(cfg);
    REQUIRE(g.tests.size() == 6u);
    CHECK(g.not_generated.empty());
    const std::vector<Scenario> expected{Scenario::random_rw, Scenario::burst_rw, Scenario::power_cycle,
                                         Scenario::fault_sweep, Scenario::ecc_exhaustive, Scenario::bus_decode_exhaustive};
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(g.tests[i].scenario == expected[i]);
        CHECK(g.tests[i].count == (is_exhaustive(expected[i]) ? 1u : kDefaultSimCount));
        CHECK(g.tests[i].runner == (is_exhaustive(expected[i]) ? Runner::exhaustive : Runner::sim));
    }
    CHECK(parse_session(g.session_text) == g.session);
    CHECK(g.session.tests.front().group == "formal");
}

TEST_CASE("ecc=none skips formal ECC testcases") {
    const auto g = generate(testing::full_config(EccLevel::none));
    CHECK(g.tests.size() == 5u);
    CHECK(g.not_generated == std::vector<std::string>{"X-TC-005"});
}

TEST_CASE("formal testcase with no exhaustive scenario is an error") {
    const std::vector<TestcaseRef> tcs{{"X-TC-009", "Liveness", Domain::formal}};
    CHECK_THROWS_AS(generate_tests(tcs, testing::full_config(), 1, "s"), Error);
}

TEST_CASE("generation is byte-identical for equal inputs") {
    const auto a = generate(testing::full_config());
    const auto b = generate(testing::full_config());
    CHECK(a.session_text == b.session_text);
    CHECK(descriptors_to_xml(a.tests, "t") == descriptors_to_xml(b.tests, "t"));
    std::string tag;
    CHECK(read_descriptors(descriptors_to_xml(a.tests, "abc"), &tag) == a.tests);
    CHECK(tag == "abc");
}

TEST_CASE("run seeds follow FNV-1a of seed/test/index") {
    // Independent FNV-1a 64 over the literal string.
    auto fnv = [](std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ull;
        return h;
    };
    CHECK(run_seed(7, "X-TC-001", 3) == fnv("7/X-TC-001/3"));
    CHECK(run_seed(7, "X-TC-001", 3) != run_seed(7, "X-TC-001", 2));
}

TEST_CASE("exhaustive case counts match the analytic formula") {
    SUBCASE("bus decode") {
        const auto cfg = testing::full_config();
        CHECK(exhaustive_case_count(Scenario::bus_decode_exhaustive, cfg) == 3u * 3u * 5u * 3u);
        const auto g = generate(cfg);
        const auto r = run_test(g.tests[5], cfg, 0, 7);
        CHECK(r.cases == exhaustive_case_count(Scenario::bus_decode_exhaustive, cfg));
    }
    SUBCASE("ecc") {
        struct Row {
            EccLevel ecc;
            int k, n, tmax;
        };
        for (const Row& row : {Row{EccLevel::sed, 8, 9, 1}, Row{EccLevel::secded, 8, 13, 3}, Row{EccLevel::dected, 8, 17, 5},
                               Row{EccLevel::secded, 16, 22, 3}}) {
            const auto cfg = testing::full_config(row.ecc, row.k);
            std::uint64_t patterns = 0;
            for (int w = 0; w <= row.tmax; ++w) patterns += choose(row.n, w);
            const std::uint64_t samples = row.k <= 8 ? (1u << row.k) : 64u;
            CHECK(exhaustive_case_count(Scenario::ecc_exhaustive, cfg) == samples * patterns);
            const auto r = run_test(generate(cfg).tests[4], cfg, 0, 7);
            CHECK(r.passed);
            CHECK(r.cases == samples * patterns);
        }
    }
    CHECK_THROWS_AS(exhaustive_case_count(Scenario::random_rw, testing::full_config()), Error);
}

TEST_CASE("clean configurations pass with full bin coverage") {
    for (auto ecc : {EccLevel::none, EccLevel::sed, EccLevel::secded, EccLevel::dected})
        for (int w : {8, 16}) {
            CAPTURE(static_cast<int>(ecc));
            CAPTURE(w);
            const auto cfg = testing::full_config(ecc, w);
            const auto g = generate(cfg);
            const auto result = run_session(g.session_text, g.tests, cfg);
            CHECK(result.fails() == 0u);
            std::set<std::string> hit;
            for (const auto& r : result.runs) hit.insert(r.bin_hits.begin(), r.bin_hits.end());
            for (const auto& bin : result.declared_bins) CHECK(hit.contains(bin));
        }
}

TEST_CASE("run results are independent of scheduling and order") {
    auto cfg = testing::full_config();
    const auto g = generate(cfg);
    const auto serial = run_session_serial(g.session_text, g.tests, cfg);
    CHECK(run_session(g.session_text, g.tests, cfg, 1) == serial);
    CHECK(run_session(g.session_text, g.tests, cfg, 4) == serial);
    CHECK(run_session(g.session_text, g.tests, cfg) == serial);

    std::vector<std::size_t> order(serial.runs.size());
    std::iota(order.begin(), order.end(), 0u);
    std::mt19937 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(order.begin(), order.end(), rng);
        CHECK(run_session_serial(g.session_text, g.tests, cfg, order) == serial);
    }
    CHECK(read_session_result(to_xml(serial)) == serial);
    CHECK(to_xml(run_session(g.session_text, g.tests, cfg)) == to_xml(serial));
}

TEST_CASE("session and descriptors must agree") {
    const auto cfg = testing::full_config();
    auto g = generate(cfg);
    auto missing = g.tests;
    missing.pop_back();
    CHECK_THROWS_AS(run_session(g.session_text, missing, cfg), Error);
    auto wrong = g.tests;
    wrong[0].runner = Runner::exhaustive;
    CHECK_THROWS_AS(run_session(g.session_text, wrong, cfg), Error);
}

TEST_CASE("seeded mutations are caught") {
    struct Case {
        Mutation m;
        EccLevel ecc;
    };
    for (const Case& c : {Case{Mutation::syndrome_swap, EccLevel::secded}, Case{Mutation::retention_loss, EccLevel::secded},
                          Case{Mutation::burst_wrap, EccLevel::sed}}) {
        CAPTURE(static_cast<int>(c.m));
        auto cfg = testing::full_config(c.ecc, 16);
        cfg.bug_mutations = {c.m};
        const auto g = generate(cfg);
        const auto result = run_session(g.session_text, g.tests, cfg);
        CHECK(result.fails() > 0u);
        for (const auto& r : result.runs) CHECK(r.passed == r.failure_log.empty());
    }
}

TEST_CASE("failure bundle and exit codes") {
    testing::TempDir dir("bundle");
    const auto clean_cfg = testing::full_config();
    auto g = generate(clean_cfg);
    const auto clean = run_session(g.session_text, g.tests, clean_cfg);
    const auto ok = collect_failures(clean, dir.str("clean"));
    CHECK(ok.exit_code == 0);
    CHECK(ok.logs.empty());
    CHECK(slurp(ok.summary_path).find("0 failures") != std::string::npos);

    auto bad_cfg = clean_cfg;
    bad_cfg.bug_mutations = {Mutation::syndrome_swap};
    g = generate(bad_cfg);
    const auto bad = run_session(g.session_text, g.tests, bad_cfg);
    const auto b = collect_failures(bad, dir.str("bad"));
    CHECK(b.exit_code == 1);
    CHECK(b.logs.size() == bad.fails());
    REQUIRE_FALSE(b.logs.empty());
    bool names_syndrome = false;
    for (const auto& log : b.logs) {
        CHECK(std::filesystem::path(log).parent_path().filename() == "failures");
        names_syndrome = names_syndrome || slurp(log).find("syndrome") != std::string::npos;
    }
    CHECK(names_syndrome);

    // A regular file where the output directory should be.
    std::ofstream(dir.str("blocked")) << "x";
    const auto infra = collect_failures(bad, dir.str("blocked"));
    CHECK(infra.exit_code == 2);
    CHECK_FALSE(infra.error.empty());
}

}  // TEST_SUITE
