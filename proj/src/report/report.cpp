#include "reqflow/report/report.hpp"

#include "reqflow/error.hpp"
#include "reqflow/text.hpp"
#include "reqflow/xml.hpp"

#include <algorithm>
#include <filesystem>

namespace reqflow::report {

namespace fs = std::filesystem;
using rmt::TestStatus;
using vplan::PlanItem;
using vplan::VPlan;

namespace {

struct Totals {
    std::size_t pass = 0, fail = 0, not_run = 0;

    void add(const PlanItem& item) {
        const TestStatus s = item.rollup ? item.rollup->status : TestStatus::not_run;
        (s == TestStatus::pass ? pass : s == TestStatus::fail ? fail : not_run)++;
    }
};

void append_row(std::string& out, const PlanItem& item) {
    const auto status = std::string(rmt::to_string(item.rollup ? item.rollup->status : TestStatus::not_run));
    std::string coverage = "-";
    std::string detail;
    if (item.rollup) {
        coverage = vplan::format_percent(item.rollup->coverage);
        detail = std::to_string(item.rollup->checks) + " checks, " + std::to_string(item.rollup->bins_hit) + "/" +
                 std::to_string(item.rollup->bins) + " bins";
        if (item.rollup->no_bins) detail += " (no bins)";
    }
    std::string links;
    for (const auto& id : item.verified_by) links += (links.empty() ? "" : " ") + ("<a href=\"#" + xml::escape(id) + "\">" + xml::escape(id) + "</a>");
    for (const auto& w : item.waivers)
        links += (links.empty() ? "" : " ") + xml::escape(w.id) + " (" + std::string(rmt::to_string(w.state)) + ")";
    if (item.blocking()) links += (links.empty() ? "" : " ") + std::string("<strong>blocking</strong>");

    out += "      <tr id=\"" + xml::escape(item.id) + "\" class=\"" + status + "\">";
    out += "<td>" + xml::escape(item.id) + "</td>";
    out += "<td>" + xml::escape(item.title) + "</td>";
    out += "<td>" + status + "</td>";
    out += "<td>" + coverage + "</td>";
    out += "<td>" + xml::escape(detail) + "</td>";
    out += "<td>" + links + "</td></tr>\n";
}

void append_section(std::string& out, const char* title, const std::vector<PlanItem>& items) {
    out += "  <h2>" + std::string(title) + "</h2>\n";
    out += "  <table>\n    <thead><tr><th>Item</th><th>Title</th><th>Status</th><th>Coverage %</th><th>Matched</th><th>Links</th></tr></thead>\n";
    out += "    <tbody>\n";
    for (const auto& item : items) append_row(out, item);
    out += "    </tbody>\n  </table>\n";
}

}  // namespace

std::string emit_vplan_html(const VPlan& plan, const HtmlOptions& options) {
    Totals req, tc;
    for (const auto& i : plan.requirements) req.add(i);
    for (const auto& i : plan.testcases) tc.add(i);
    auto totals = [](const char* name, std::size_t n, const Totals& t) {
        return "<li>" + std::string(name) + ": " + std::to_string(n) + " (pass " + std::to_string(t.pass) + ", fail " +
               std::to_string(t.fail) + ", not_run " + std::to_string(t.not_run) + ")</li>";
    };

    std::string out = "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n";
    out += "<title>vPlan " + xml::escape(plan.config_tag) + "</title>\n";
    out += "<style>table{border-collapse:collapse}td,th{border:1px solid #999;padding:2px 6px}"
           "tr.pass td:nth-child(3){color:#060}tr.fail td:nth-child(3){color:#b00}tr.not_run td:nth-child(3){color:#777}</style>\n";
    out += "</head>\n<body>\n";
    out += "  <h1>vPlan " + xml::escape(plan.config_tag) + "</h1>\n";
    out += "  <ul id=\"summary\">\n";
    if (!options.session.empty()) out += "    <li>Session: " + xml::escape(options.session) + "</li>\n";
    out += "    " + totals("Requirements", plan.requirements.size(), req) + "\n";
    out += "    " + totals("Testcases", plan.testcases.size(), tc) + "\n";
    const auto blocking = std::count_if(plan.requirements.begin(), plan.requirements.end(), [](const PlanItem& i) { return i.blocking(); });
    out += "    <li>Blocking requirements: " + std::to_string(blocking) + "</li>\n";
    if (plan.unmapped) out += "    <li>Unmapped entities: " + std::to_string(*plan.unmapped) + "</li>\n";
    if (options.stamp) out += "    <li>Generated: " + xml::escape(*options.stamp) + "</li>\n";
    out += "  </ul>\n";
    append_section(out, "Requirements", plan.requirements);
    append_section(out, "Testcases", plan.testcases);
    out += "</body>\n</html>\n";
    return out;
}

std::string archive_report(std::string_view html, const std::string& archive_dir, const std::string& config_tag,
                           const std::string& session) {
    if (config_tag.empty() || session.empty() || session.find('/') != std::string::npos)
        fail(ErrorKind::validation, "archive needs a config_tag and a plain session name");
    const fs::path dir = fs::absolute(fs::path(archive_dir)) / config_tag / session;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorKind::io, "cannot create archive directory " + dir.string() + ": " + ec.message());
    const fs::path file = (dir / "vplan.html").lexically_normal();
    write_file_atomic(file.string(), html);
    return "file://" + file.string();
}

std::string link_path(std::string_view link) {
    constexpr std::string_view prefix = "file://";
    if (!link.starts_with(prefix)) fail(ErrorKind::validation, "not a file:// link: " + std::string(link));
    return std::string(link.substr(prefix.size()));
}

RmtReport make_rmt_report(const VPlan& plan, const std::string& session, const std::string& link) {
    if (link.empty()) fail(ErrorKind::validation, "report needs an archive link");
    RmtReport r{session, plan.config_tag, link, {}, {}};
    for (const auto& tc : plan.testcases) {
        const auto& ro = tc.rollup;
        r.testcases.push_back({tc.id, ro ? ro->status : TestStatus::not_run, ro ? vplan::format_percent(ro->coverage) : "0.0"});
    }
    for (const auto& req : plan.requirements)
        r.hwrqs.push_back({req.id, req.rollup ? req.rollup->status : TestStatus::not_run, req.blocking()});
    return r;
}

std::string to_xml(const RmtReport& report) {
    xml::Writer w;
    w.open("rmt-report", {{"session", report.session}, {"config_tag", report.config_tag}, {"archive", report.archive}});
    for (const auto& t : report.testcases)
        w.leaf("testcase", {{"id", t.id}, {"status", std::string(rmt::to_string(t.status))}, {"coverage", t.coverage}});
    for (const auto& h : report.hwrqs)
        w.leaf("hwrq", {{"id", h.id}, {"status", std::string(rmt::to_string(h.status))}, {"blocking", h.blocking ? "true" : "false"}});
    return w.finish();
}

RmtReport read_rmt_report(std::string_view document) {
    const xml::Node root = xml::parse(document);
    if (root.name != "rmt-report") fail(ErrorKind::validation, "expected <rmt-report> root, got <" + root.name + ">");
    RmtReport r;
    r.session = root.required_attr("session");
    r.config_tag = root.required_attr("config_tag");
    r.archive = root.required_attr("archive");
    auto status_of = [](const xml::Node& n) {
        const auto s = rmt::parse_test_status(n.required_attr("status"));
        if (!s) fail(ErrorKind::validation, "report row '" + n.required_attr("id") + "' has unknown status");
        return *s;
    };
    for (const auto* n : root.children_named("testcase")) r.testcases.push_back({n->required_attr("id"), status_of(*n), n->required_attr("coverage")});
    for (const auto* n : root.children_named("hwrq")) r.hwrqs.push_back({n->required_attr("id"), status_of(*n), n->required_attr("blocking") == "true"});
    return r;
}

std::string emit_rmt_xml(const VPlan& plan, const std::string& session, const std::string& link) {
    return to_xml(make_rmt_report(plan, session, link));
}

std::size_t push_results(std::string_view rmt_xml, rmt::ResultSink& sink) {
    const RmtReport report = read_rmt_report(rmt_xml);
    std::vector<rmt::TestResultUpdate> updates;
    for (const auto& row : report.testcases) {
        double coverage = 0;
        try {
            coverage = std::stod(row.coverage);
        } catch (const std::logic_error&) {
            fail(ErrorKind::validation, "report row '" + row.id + "' has bad coverage '" + row.coverage + "'");
        }
        updates.push_back({row.id, row.status, coverage, report.archive});
    }
    if (!updates.empty()) sink.apply(updates);
    return updates.size();
}

}  // namespace reqflow::report
