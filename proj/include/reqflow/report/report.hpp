#pragma once

#include "reqflow/rmt/service.hpp"
#include "reqflow/vplan/vplan.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace reqflow::report {

struct HtmlOptions {
    std::string session;
    std::optional<std::string> stamp;  // only emitted when set
};

/// Static page with one table row per plan item; row element ids are the
/// item ids. Output bytes depend only on the plan and options.
std::string emit_vplan_html(const vplan::VPlan& plan, const HtmlOptions& options = {});

/// Stores `html` at <archive_dir>/<config_tag>/<session>/vplan.html
/// (overwriting) and returns its file:// URI.
std::string archive_report(std::string_view html, const std::string& archive_dir, const std::string& config_tag,
                           const std::string& session);

/// Resolves a file:// link back to a filesystem path.
std::string link_path(std::string_view link);

struct TestcaseRow {
    std::string id;
    rmt::TestStatus status = rmt::TestStatus::not_run;
    std::string coverage;  // one decimal place

    bool operator==(const TestcaseRow&) const = default;
};

struct HwrqRow {
    std::string id;
    rmt::TestStatus status = rmt::TestStatus::not_run;
    bool blocking = false;

    bool operator==(const HwrqRow&) const = default;
};

struct RmtReport {
    std::string session;
    std::string config_tag;
    std::string archive;
    std::vector<TestcaseRow> testcases;
    std::vector<HwrqRow> hwrqs;

    bool operator==(const RmtReport&) const = default;
};

RmtReport make_rmt_report(const vplan::VPlan& plan, const std::string& session, const std::string& link);
std::string to_xml(const RmtReport& report);
RmtReport read_rmt_report(std::string_view document);

/// make_rmt_report + to_xml.
std::string emit_rmt_xml(const vplan::VPlan& plan, const std::string& session, const std::string& link);

/// Applies every testcase row as one atomic batch; returns the row count.
std::size_t push_results(std::string_view rmt_xml, rmt::ResultSink& sink);

}  // namespace reqflow::report
