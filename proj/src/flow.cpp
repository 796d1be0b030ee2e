#include "reqflow/flow.hpp"

#include "reqflow/error.hpp"
#include "reqflow/regression/generate.hpp"
#include "reqflow/regression/runner.hpp"
#include "reqflow/report/report.hpp"
#include "reqflow/rmt/store.hpp"
#include "reqflow/text.hpp"
#include "reqflow/vplan/vplan.hpp"
#include "reqflow/xml.hpp"

#include <chrono>
#include <filesystem>
#include <numeric>

namespace reqflow::flow {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSessionName = "regression";

std::string in(const std::string& dir, const char* file) { return (fs::path(dir) / file).string(); }

}  // namespace

std::string default_superset_path() { return (fs::path(REQFLOW_DATA_DIR) / "superset.xml").string(); }

std::string_view to_string(StepStatus s) {
    switch (s) {
        case StepStatus::ok: return "ok";
        case StepStatus::failed: return "failed";
        case StepStatus::skipped: return "skipped";
    }
    return "?";
}

void ensure_superset(rmt::StoreService& store, const std::string& superset_path) {
    const bool has_superset = store.read([](const rmt::Store& s) {
        const auto all = s.items();
        return std::any_of(all.begin(), all.end(), [](const rmt::RmtItem* i) { return !i->is_subset(); });
    });
    if (has_superset) return;
    const rmt::Store fixture = rmt::Store::load_from(superset_path);
    store.write([&](rmt::Store& s) { s.import_superset(fixture); });
}

rmt::SubsetReport step_derive(rmt::StoreService& store, const IpConfiguration& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const auto report = store.write([&](rmt::Store& s) { return s.derive_subset(cfg); });
    write_file_atomic(in(out_dir, "subset-report.xml"), rmt::subset_report_document(report));
    write_file_atomic(in(out_dir, "ipvs.xml"), store.read([&](const rmt::Store& s) { return s.export_ipvs(report.config_tag); }));
    return report;
}

void step_plan(const std::string& out_dir) {
    vplan::VPlan plan = vplan::build_vplan(read_file(in(out_dir, "ipvs.xml")));
    vplan::apply_default_mappings(plan);
    write_file_atomic(in(out_dir, "vplan.xml"), vplan::to_xml(plan));
}

void step_generate(const IpConfiguration& cfg, std::uint64_t seed, const std::string& out_dir) {
    const std::string ipvs = read_file(in(out_dir, "ipvs.xml"));
    const auto tag = xml::parse(ipvs).required_attr("config_tag");
    if (tag != config_tag(cfg)) fail(ErrorKind::validation, "ipvs.xml was derived for config " + tag + ", not " + config_tag(cfg));
    const auto refs = regression::testcases_from_ipvs(ipvs);
    const auto gen = regression::generate_tests(refs, cfg, seed, kSessionName);
    write_file_atomic(in(out_dir, "tests.xml"), regression::descriptors_to_xml(gen.tests, tag));
    write_file_atomic(in(out_dir, "session.vsif"), gen.session_text);
}

int step_run(const IpConfiguration& cfg, int jobs, const std::string& out_dir) {
    std::string tag;
    const auto tests = regression::read_descriptors(read_file(in(out_dir, "tests.xml")), &tag);
    if (tag != config_tag(cfg)) fail(ErrorKind::validation, "tests.xml was generated for config " + tag + ", not " + config_tag(cfg));
    const auto result = regression::run_session(read_file(in(out_dir, "session.vsif")), tests, cfg, jobs);
    write_file_atomic(in(out_dir, "session-result.xml"), regression::to_xml(result));
    const auto bundle = regression::collect_failures(result, out_dir);
    if (bundle.exit_code == 2) fail(ErrorKind::io, "cannot write failure bundle: " + bundle.error);
    return bundle.exit_code;
}

ReportOutcome step_report(rmt::ResultSink& sink, const std::string& out_dir, const std::string& archive_dir,
                          const std::optional<std::string>& stamp) {
    const auto session = regression::read_session_result(read_file(in(out_dir, "session-result.xml")));
    vplan::VPlan plan = vplan::read_vplan(read_file(in(out_dir, "vplan.xml")));
    if (plan.config_tag != session.config_tag)
        fail(ErrorKind::validation, "vplan.xml and session-result.xml belong to different configurations");
    plan = vplan::rollup(std::move(plan), session);
    write_file_atomic(in(out_dir, "vplan-rollup.xml"), vplan::to_xml(plan));

    const std::string html = report::emit_vplan_html(plan, {session.session_name, stamp});
    ReportOutcome out;
    out.link = report::archive_report(html, archive_dir, plan.config_tag, session.session_name);
    write_file_atomic(in(out_dir, "vplan.html"), html);
    const std::string rmt_xml = report::emit_rmt_xml(plan, session.session_name, out.link);
    write_file_atomic(in(out_dir, "rmt-report.xml"), rmt_xml);
    out.pushed = report::push_results(rmt_xml, sink);
    out.fails = session.fails();
    if (!plan.testcases.empty()) {
        double sum = 0;
        for (const auto& tc : plan.testcases) sum += tc.rollup->coverage.value();
        out.coverage_mean = sum / static_cast<double>(plan.testcases.size());
    }
    return out;
}

FlowOutcome run_flow(const FlowOptions& o) {
    FlowOutcome outcome;
    for (const char* s : kSteps) outcome.steps[s] = StepStatus::skipped;
    const char* current = "config";
    auto infra = [&](const std::string& what) {
        outcome.exit_code = 2;
        outcome.error = std::string(current) + ": " + what;
        if (outcome.steps.contains(current)) outcome.steps[current] = StepStatus::failed;
        return outcome;
    };
    try {
        // Inputs are validated before anything is written.
        const IpConfiguration cfg = parse_config(o.config_text ? *o.config_text : read_file(o.config_path));
        outcome.config_tag = config_tag(cfg);
        current = "superset";
        if (!o.store_path && !fs::exists(o.superset_path)) fail(ErrorKind::io, "cannot read " + o.superset_path);

        fs::create_directories(o.out_dir);
        const std::string store_path = o.store_path.value_or(in(o.out_dir, "store.xml"));
        const std::string archive = o.archive_dir.value_or(in(o.out_dir, "archive"));
        // Re-runs restart: the default per-run store must not carry statuses
        // pushed by an earlier run into this run's ipvs export.
        if (!o.store_path) fs::remove(store_path);
        auto store = rmt::StoreService::open(store_path);
        ensure_superset(*store, o.superset_path);
        write_file_atomic(in(o.out_dir, "config.cfg"), canonical_text(cfg));

        current = "derive";
        step_derive(*store, cfg, o.out_dir);
        outcome.steps[current] = StepStatus::ok;

        current = "plan";
        step_plan(o.out_dir);
        outcome.steps[current] = StepStatus::ok;

        current = "generate";
        step_generate(cfg, o.seed, o.out_dir);
        outcome.steps[current] = StepStatus::ok;

        current = "run";
        const int run_code = step_run(cfg, o.jobs, o.out_dir);
        outcome.steps[current] = StepStatus::ok;

        current = "report";
        rmt::ServiceSink sink(*store);
        const auto rep = step_report(sink, o.out_dir, archive, o.stamp);
        outcome.steps[current] = StepStatus::ok;

        outcome.archive_link = rep.link;
        outcome.fails = rep.fails;
        outcome.coverage_mean = rep.coverage_mean;
        outcome.runs = regression::read_session_result(read_file(in(o.out_dir, "session-result.xml"))).runs.size();
        outcome.exit_code = run_code;
        for (const char* f : {"config.cfg", "subset-report.xml", "ipvs.xml", "vplan.xml", "tests.xml", "session.vsif",
                              "session-result.xml", "vplan-rollup.xml", "vplan.html", "rmt-report.xml"})
            outcome.artifacts.push_back(in(o.out_dir, f));
        outcome.artifacts.push_back((fs::path(o.out_dir) / "failures" / "summary.txt").string());
        outcome.artifacts.push_back(store_path);
        return outcome;
    } catch (const std::exception& e) {
        return infra(e.what());
    }
}

std::vector<SweepRow> run_sweep(const std::string& matrix_path, const FlowOptions& base) {
    const auto configs = expand_matrix(parse_matrix(read_file(matrix_path)));
    fs::create_directories(base.out_dir);
    const std::string archive = base.archive_dir.value_or(in(base.out_dir, "archive"));

    std::vector<SweepRow> rows;
    std::string tsv = "config_tag\tconfig\texit\tfails\tcoverage_mean\twall_s\terror\n";
    for (const auto& cfg : configs) {
        SweepRow row;
        row.config_tag = config_tag(cfg);
        std::string lp;
        for (auto m : cfg.lp_modes) lp += (lp.empty() ? "" : "+") + std::string(to_string(m));
        row.summary = std::string(to_string(cfg.ecc)) + "/" + std::string(to_string(cfg.tech)) + "/w" +
                      std::to_string(cfg.data_width) + "/" + (lp.empty() ? "{}" : lp);

        FlowOptions o = base;
        o.config_text = canonical_text(cfg);
        o.out_dir = in(base.out_dir, row.config_tag.c_str());
        o.archive_dir = archive;
        const auto t0 = std::chrono::steady_clock::now();
        const auto outcome = run_flow(o);
        row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        row.exit_code = outcome.exit_code;
        row.fails = outcome.fails;
        row.coverage_mean = outcome.coverage_mean;
        row.error = outcome.error;

        char wall[32];
        std::snprintf(wall, sizeof wall, "%.3f", row.wall_seconds);
        tsv += row.config_tag + "\t" + row.summary + "\t" + std::to_string(row.exit_code) + "\t" + std::to_string(row.fails) + "\t" +
               format_fixed1(row.coverage_mean) + "\t" + wall + "\t" + row.error + "\n";
        rows.push_back(std::move(row));
    }
    write_file_atomic(in(base.out_dir, "sweep-summary.tsv"), tsv);
    return rows;
}

}  // namespace reqflow::flow
