#include "reqflow/error.hpp"
#include "reqflow/vplan/vplan.hpp"
#include "rollup_oracle.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <regex>

using namespace reqflow;
using namespace reqflow::vplan;
using regression::CheckRecord;
using regression::RunResult;
using regression::SessionResult;
using rmt::TestStatus;

namespace {

struct Ipvs {
    std::string tag = "t0";
    std::string body;

    Ipvs& item(const std::string& id, const char* kind, const char* extra = "") {
        body += "<item id=\"" + id + "\" kind=\"" + kind + "\" state=\"approved\" origin=\"o\" " + extra + "><title>" + id +
                "</title></item>";
        return *this;
    }
    Ipvs& rel(const std::string& from, const std::string& to, const char* kind) {
        body += "<rel from=\"" + from + "\" to=\"" + to + "\" kind=\"" + kind + "\"/>";
        return *this;
    }
    std::string str() const { return "<ipvs config_tag=\"" + tag + "\">" + body + "</ipvs>"; }
};

RunResult run(const std::string& test, std::uint32_t idx, std::vector<CheckRecord> checks, std::vector<std::string> hits) {
    RunResult r;
    r.test = test;
    r.run_index = idx;
    r.checks = std::move(checks);
    r.bin_hits = std::move(hits);
    r.passed = std::all_of(r.checks.begin(), r.checks.end(), [](const CheckRecord& c) { return c.passed; });
    return r;
}

}  // namespace

TEST_SUITE("vplan") {

TEST_CASE("pattern matching agrees with a regex oracle") {
    const std::vector<std::string> patterns{"chk.A.x", "chk.*.x", "chk.**", "cov.A.**", "*.A.*", "**", "cov.*.p.**", "**.b1"};
    const std::vector<std::string> names{"chk.A.x",   "chk.B.x",  "chk.A",    "chk.A.x.y", "cov.A.p.b1", "cov.B.p.b1",
                                         "cov.A",     "x",        "chk.A.xx", "cov.A.q.b1", "chk.Ax.x"};
    for (const auto& p : patterns) {
        const auto compiled = MappingPattern::parse(p);
        const auto re = testing::pattern_regex(p);
        for (const auto& n : names) {
            CAPTURE(p);
            CAPTURE(n);
            CHECK(match(compiled, n) == std::regex_match(n, re));
        }
    }
    std::mt19937 rng(5);
    const std::vector<std::string> alphabet{"a", "b", "c", "*", "**"};
    for (int i = 0; i < 300; ++i) {
        std::string p, n;
        const int ps = 1 + static_cast<int>(rng() % 4), ns = 1 + static_cast<int>(rng() % 5);
        for (int s = 0; s < ps; ++s) p += (s ? "." : "") + alphabet[rng() % alphabet.size()];
        for (int s = 0; s < ns; ++s) n += (s ? "." : "") + alphabet[rng() % 3];
        CAPTURE(p);
        CAPTURE(n);
        CHECK(match(MappingPattern::parse(p), n) == std::regex_match(n, testing::pattern_regex(p)));
    }
}

TEST_CASE("malformed patterns are rejected") {
    for (const char* bad : {"", "cov..x", ".a", "a.", "a*.b", "a.**b", "a. b"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(MappingPattern::parse(bad), Error);
    }
    CHECK(is_entity_name("chk.T.x"));
    CHECK(is_entity_name("cov.T.p.b"));
    CHECK_FALSE(is_entity_name("chk"));
    CHECK_FALSE(is_entity_name("foo.T.x"));
    CHECK_FALSE(is_entity_name("chk..x"));
}

TEST_CASE("rational arithmetic and percent formatting") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(150, 1) / 2 == Rational(75, 1));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(format_percent(Rational(175, 2)) == "87.5");
    CHECK(format_percent(Rational(200, 3)) == "66.7");
    CHECK(format_percent(Rational(1, 20)) == "0.1");   // 0.05 rounds up
    CHECK(format_percent(Rational(1, 21)) == "0.0");
    CHECK(format_percent(Rational(100, 1)) == "100.0");
    CHECK_THROWS_AS(Rational(1, 0), Error);
}

TEST_CASE("build from ipvs") {
    Ipvs doc;
    doc.item("H1", "hwrq").item("H2", "hwrq").item("T1", "testcase", "domain=\"simulation\"");
    doc.item("W1", "waiver", "target=\"H2\"").rel("T1", "H1", "verifies").rel("W1", "H2", "waives");
    const auto plan = build_vplan(doc.str());
    CHECK(plan.config_tag == "t0");
    CHECK(plan.size() == 3u);
    CHECK(plan.find("H1")->verified_by == std::vector<std::string>{"T1"});
    REQUIRE(plan.find("H2")->waivers.size() == 1u);
    CHECK(plan.find("H2")->has_approved_waiver());
    CHECK_FALSE(plan.find("H2")->blocking());
    CHECK_FALSE(plan.find("H1")->blocking());
    CHECK(plan.find("W1") == nullptr);

    CHECK(build_vplan("<ipvs config_tag=\"e\"/>").size() == 0u);
    Ipvs dup;
    dup.item("H1", "hwrq").item("H1", "hwrq");
    CHECK_THROWS_AS(build_vplan(dup.str()), Error);
    CHECK_THROWS_AS(build_vplan("<vplan/>"), Error);
}

TEST_CASE("an unapproved waiver leaves the requirement blocking") {
    Ipvs doc;
    doc.item("H1", "hwrq");
    doc.body += "<item id=\"W1\" kind=\"waiver\" state=\"in_review\" origin=\"o\" target=\"H1\"><title/></item>";
    doc.rel("W1", "H1", "waives");
    const auto plan = build_vplan(doc.str());
    CHECK(plan.find("H1")->blocking());
}

TEST_CASE("mapping patterns have set semantics") {
    Ipvs doc;
    doc.item("T1", "testcase", "domain=\"formal\"").item("T2", "testcase", "domain=\"formal\"");
    auto plan = build_vplan(doc.str());
    add_mapping_pattern(plan, "T1", "chk.X.**");
    add_mapping_pattern(plan, "T1", "chk.X.**");
    CHECK(plan.find("T1")->patterns.size() == 1u);
    CHECK_THROWS_AS(add_mapping_pattern(plan, "T1", "cov..x"), Error);
    try {
        add_mapping_pattern(plan, "T9", "chk.**");
        FAIL("expected not_found");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::not_found);
    }
    apply_default_mappings(plan);
    CHECK(plan.find("T1")->patterns == std::set<std::string>{"chk.X.**"});
    CHECK(plan.find("T2")->patterns == std::set<std::string>{"chk.T2.**", "cov.T2.**"});
}

TEST_CASE("rollup examples") {
    Ipvs doc;
    doc.item("H1", "hwrq").item("H2", "hwrq").item("T1", "testcase", "domain=\"simulation\"");
    doc.item("T2", "testcase", "domain=\"simulation\"").item("T3", "testcase", "domain=\"simulation\"");
    doc.rel("T1", "H1", "verifies").rel("T2", "H1", "verifies");
    auto plan = build_vplan(doc.str());
    apply_default_mappings(plan);

    SessionResult s;
    s.declared_bins = {"cov.T1.p.a", "cov.T1.p.b", "cov.T1.p.c", "cov.T1.p.d", "cov.T2.p.a", "cov.T2.p.b"};
    s.runs = {run("T1", 0, {{"chk.T1.x", true}}, {"cov.T1.p.a"}),
              run("T1", 1, {{"chk.T1.x", true}}, {"cov.T1.p.c"}),
              run("T2", 0, {{"chk.T2.x", true}}, {"cov.T2.p.a", "cov.T2.p.b"}),
              run("T2", 1, {{"chk.T2.x", false}}, {}),
              run("T9", 0, {{"chk.T9.x", true}}, {})};
    const auto r = rollup(plan, s);

    const Rollup& t1 = *r.find("T1")->rollup;
    CHECK(t1.status == TestStatus::pass);
    CHECK(t1.bins == 4u);
    CHECK(t1.bins_hit == 2u);
    CHECK(format_percent(t1.coverage) == "50.0");

    const Rollup& t2 = *r.find("T2")->rollup;
    CHECK(t2.status == TestStatus::fail);  // a check is only passed if it passed in every run
    CHECK(t2.coverage == Rational(100, 1));

    const Rollup& t3 = *r.find("T3")->rollup;
    CHECK(t3.status == TestStatus::not_run);
    CHECK(t3.no_bins);
    CHECK(t3.coverage == Rational(100, 1));

    const Rollup& h1 = *r.find("H1")->rollup;
    CHECK(h1.status == TestStatus::fail);
    CHECK(format_percent(h1.coverage) == "75.0");

    const Rollup& h2 = *r.find("H2")->rollup;
    CHECK(h2.status == TestStatus::not_run);
    CHECK(h2.coverage == Rational(0, 1));

    CHECK(r.unmapped == 1u);  // chk.T9.x
}

TEST_CASE("rollup recount oracle over random instances") {
    std::mt19937 rng(2024);
    for (int instance = 0; instance < 50; ++instance) {
        CAPTURE(instance);
        const auto in = testing::random_rollup_instance(rng);
        CHECK(testing::compare_rollup(rollup(in.plan, in.session), testing::recount_rollup(in)) == "");
    }
}

TEST_CASE("adding hits never lowers coverage; adding failures never improves status") {
    Ipvs doc;
    doc.item("H", "hwrq").item("T", "testcase", "domain=\"simulation\"").rel("T", "H", "verifies");
    auto plan = build_vplan(doc.str());
    apply_default_mappings(plan);
    SessionResult s;
    for (int b = 0; b < 8; ++b) s.declared_bins.push_back("cov.T.p.b" + std::to_string(b));
    std::sort(s.declared_bins.begin(), s.declared_bins.end());
    s.runs = {run("T", 0, {{"chk.T.x", true}}, {})};
    Rational prev = rollup(plan, s).find("H")->rollup->coverage;
    for (int b = 0; b < 8; ++b) {
        s.runs[0].bin_hits.push_back("cov.T.p.b" + std::to_string(b));
        std::sort(s.runs[0].bin_hits.begin(), s.runs[0].bin_hits.end());
        const Rational now = rollup(plan, s).find("H")->rollup->coverage;
        CHECK(now >= prev);
        prev = now;
    }
    CHECK(prev == Rational(100, 1));
    CHECK(rollup(plan, s).find("H")->rollup->status == TestStatus::pass);
    s.runs.push_back(run("T", 1, {{"chk.T.x", false}}, {}));
    CHECK(rollup(plan, s).find("H")->rollup->status == TestStatus::fail);
}

TEST_CASE("rollup does not depend on run order; XML round-trips") {
    Ipvs doc;
    doc.item("H", "hwrq").item("T", "testcase", "domain=\"simulation\"").item("U", "testcase", "domain=\"formal\"");
    doc.rel("T", "H", "verifies").rel("U", "H", "verifies");
    auto plan = build_vplan(doc.str());
    apply_default_mappings(plan);
    add_mapping_pattern(plan, "H", "chk.U.extra");
    SessionResult s;
    s.declared_bins = {"cov.T.p.a", "cov.T.p.b", "cov.U.p.a"};
    s.runs = {run("T", 0, {{"chk.T.x", true}}, {"cov.T.p.a"}), run("T", 1, {{"chk.T.x", true}}, {"cov.T.p.b"}),
              run("U", 0, {{"chk.U.x", true}, {"chk.U.extra", false}}, {})};
    const auto base = rollup(plan, s);
    std::mt19937 rng(3);
    for (int i = 0; i < 6; ++i) {
        std::shuffle(s.runs.begin(), s.runs.end(), rng);
        CHECK(rollup(plan, s) == base);
    }
    CHECK(read_vplan(to_xml(base)) == base);
    CHECK(to_xml(read_vplan(to_xml(base))) == to_xml(base));
    CHECK(read_vplan(to_xml(plan)) == plan);
}

}  // TEST_SUITE
