#include "reqflow/flow.hpp"
#include "reqflow/report/report.hpp"
#include "reqflow/rmt/store.hpp"
#include "support.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace reqflow;
using namespace reqflow::flow;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string example_config() { return (fs::path(default_superset_path()).parent_path() / "example.cfg").string(); }

FlowOptions options_for(const testing::TempDir& dir, const std::string& sub) {
    FlowOptions o;
    o.config_path = example_config();
    o.out_dir = dir.str(sub);
    o.archive_dir = dir.str("archive");
    return o;
}

}  // namespace

TEST_SUITE("flow") {

TEST_CASE("clean example configuration runs end to end") {
    testing::TempDir dir("flow");
    const auto out = run_flow(options_for(dir, "a"));
    CHECK(out.exit_code == 0);
    CHECK(out.error.empty());
    for (const char* step : kSteps) CHECK(out.steps.at(step) == StepStatus::ok);
    for (const auto& a : out.artifacts) {
        CAPTURE(a);
        CHECK(fs::exists(a));
    }
    CHECK(out.runs > 0u);
    CHECK(out.fails == 0u);
    CHECK(out.coverage_mean == 100.0);
    REQUIRE(out.archive_link.starts_with("file://"));
    CHECK(slurp(report::link_path(out.archive_link)) == slurp(dir.path() / "a" / "vplan.html"));

    const auto rep = report::read_rmt_report(slurp(dir.path() / "a" / "rmt-report.xml"));
    CHECK_FALSE(rep.testcases.empty());
    for (const auto& h : rep.hwrqs) CHECK_FALSE(h.blocking);
}

TEST_CASE("flow output is deterministic") {
    testing::TempDir dir("det");
    REQUIRE(run_flow(options_for(dir, "a")).exit_code == 0);
    REQUIRE(run_flow(options_for(dir, "b")).exit_code == 0);
    for (const char* f : {"ipvs.xml", "vplan.xml", "tests.xml", "session.vsif", "session-result.xml", "vplan.html",
                          "rmt-report.xml", "vplan-rollup.xml"}) {
        CAPTURE(f);
        CHECK(slurp(dir.path() / "a" / f) == slurp(dir.path() / "b" / f));
    }
    const auto first = slurp(dir.path() / "a" / "ipvs.xml");
    REQUIRE(run_flow(options_for(dir, "a")).exit_code == 0);
    CHECK(slurp(dir.path() / "a" / "ipvs.xml") == first);
}

TEST_CASE("seeded mutations make the flow exit 1 with a failure bundle") {
    for (auto m : {Mutation::syndrome_swap, Mutation::retention_loss, Mutation::burst_wrap}) {
        CAPTURE(to_string(m));
        testing::TempDir dir("mut");
        auto cfg = parse_config(slurp(example_config()));
        cfg.bug_mutations = {m};
        auto o = options_for(dir, "m");
        o.config_text = canonical_text(cfg);
        const auto out = run_flow(o);
        CHECK(out.exit_code == 1);
        CHECK(out.fails > 0u);
        std::size_t logs = 0;
        for (const auto& e : fs::directory_iterator(dir.path() / "m" / "failures"))
            logs += e.path().extension() == ".log";
        CHECK(logs == out.fails);
        const auto rep = report::read_rmt_report(slurp(dir.path() / "m" / "rmt-report.xml"));
        CHECK(std::any_of(rep.testcases.begin(), rep.testcases.end(),
                          [](const report::TestcaseRow& r) { return r.status == rmt::TestStatus::fail; }));
    }
}

TEST_CASE("infrastructure errors exit 2") {
    testing::TempDir dir("infra");
    auto o = options_for(dir, "missing");
    o.config_path = dir.str("nope.cfg");
    auto out = run_flow(o);
    CHECK(out.exit_code == 2);
    CHECK_FALSE(out.error.empty());
    CHECK_FALSE(fs::exists(dir.path() / "missing"));

    o = options_for(dir, "bad");
    o.config_text = "data_width = 12\n";
    CHECK(run_flow(o).exit_code == 2);

    o = options_for(dir, "superset");
    o.superset_path = dir.str("none.xml");
    CHECK(run_flow(o).exit_code == 2);
}

TEST_CASE("ensure_superset imports once") {
    rmt::StoreService svc;
    ensure_superset(svc, default_superset_path());
    const auto n = svc.read([](const rmt::Store& s) { return s.items().size(); });
    CHECK(n > 0u);
    ensure_superset(svc, default_superset_path());
    CHECK(svc.read([](const rmt::Store& s) { return s.items().size(); }) == n);
}

TEST_CASE("sweep over a small matrix") {
    testing::TempDir dir("sweep");
    std::ofstream(dir.str("m.txt")) << "ip_name = s\naddr_words = 64\necc = sed, secded\ntech = sram_hd\ndata_width = 8\n"
                                       "lp_modes = {}, shutdown\nahb_bursts = single+incr4\n";
    FlowOptions base;
    base.out_dir = dir.str("out");
    const auto rows = run_sweep(dir.str("m.txt"), base);
    REQUIRE(rows.size() == 4u);
    for (const auto& r : rows) {
        CHECK(r.exit_code == 0);
        CHECK(fs::exists(dir.path() / "out" / r.config_tag / "rmt-report.xml"));
    }
    const auto tsv = slurp(dir.path() / "out" / "sweep-summary.tsv");
    CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 5);
}

TEST_CASE("fixture: every derived requirement is verified or waived") {
    const auto superset = rmt::Store::load_from(default_superset_path());
    std::size_t configs = 0;
    for (const auto& cfg : testing::broad_configs()) {
        rmt::Store s = superset;
        const auto report = s.derive_subset(cfg);
        const auto tag = config_tag(cfg);
        CHECK(report.hwrqs > 0u);
        for (const auto& id : report.waiver_required) {
            bool waived = false;
            for (const auto& rel : s.relationships())
                if (rel.kind == rmt::RelKind::waives && rel.to == id)
                    waived = waived || s.get(rel.from).state == rmt::ReviewState::approved;
            CAPTURE(canonical_text(cfg));
            CHECK_MESSAGE(waived, id);
        }
        ++configs;
    }
    CHECK(configs > 1000u);
}

}  // TEST_SUITE
