#include "reqflow/regression/generate.hpp"

#include "reqflow/ecc.hpp"
#include "reqflow/error.hpp"
#include "reqflow/text.hpp"
#include "reqflow/xml.hpp"

#include <algorithm>
#include <optional>

namespace reqflow::regression {

namespace {

std::vector<std::string> burst_bins(const IpConfiguration& cfg) {
    std::vector<std::string> out;
    for (Burst b : cfg.ahb_bursts) out.emplace_back(to_string(b));
    return out;
}

std::optional<Scenario> formal_scenario(const TestcaseRef& tc, const IpConfiguration& cfg, bool& skipped) {
    skipped = false;
    if (contains_icase(tc.title, "ecc") || contains_icase(tc.title, "edc")) {
        if (cfg.ecc == EccLevel::none) {
            skipped = true;
            return std::nullopt;
        }
        return Scenario::ecc_exhaustive;
    }
    if (contains_icase(tc.title, "bus") || contains_icase(tc.title, "decode")) return Scenario::bus_decode_exhaustive;
    return std::nullopt;
}

Scenario sim_scenario(const TestcaseRef& tc) {
    if (contains_icase(tc.title, "burst")) return Scenario::burst_rw;
    if (contains_icase(tc.title, "power")) return Scenario::power_cycle;
    if (contains_icase(tc.title, "fault")) return Scenario::fault_sweep;
    return Scenario::random_rw;
}

}  // namespace

std::vector<TestcaseRef> testcases_from_ipvs(std::string_view ipvs) {
    const xml::Node root = xml::parse(ipvs);
    if (root.name != "ipvs") fail(ErrorKind::validation, "expected <ipvs> root");
    std::vector<TestcaseRef> out;
    for (const auto* n : root.children_named("item")) {
        if (n->required_attr("kind") != "testcase") continue;
        TestcaseRef tc;
        tc.id = n->required_attr("id");
        tc.title = n->child_text("title");
        const std::string domain = n->attr("domain").value_or("");
        auto d = rmt::parse_domain(domain);
        if (!d) fail(ErrorKind::validation, "testcase '" + tc.id + "' has no valid domain");
        tc.domain = *d;
        out.push_back(std::move(tc));
    }
    return out;
}

std::vector<Coverpoint> declared_coverpoints(Scenario scenario, const IpConfiguration& cfg) {
    const ecc::Capability cap = ecc::capability(cfg.ecc);
    switch (scenario) {
        case Scenario::random_rw:
            return {{"op", {"idle", "read", "write"}}, {"burst", burst_bins(cfg)}, {"region", {"high", "low", "mid"}}};
        case Scenario::burst_rw: {
            std::vector<std::string> edges{"first_word", "last_word", "out_of_range"};
            if (cfg.ahb_bursts.size() > 1) edges.insert(edges.begin(), "crossing");
            return {{"burst", burst_bins(cfg)}, {"edge", edges}};
        }
        case Scenario::power_cycle: {
            std::vector<std::string> bins;
            for (LpMode m : cfg.lp_modes) {
                bins.push_back("enter_" + std::string(to_string(m)));
                bins.push_back("exit_" + std::string(to_string(m)));
            }
            if (cfg.lp_modes.empty()) bins.push_back("stay_active");
            std::vector<Coverpoint> cps{{"transition", bins}};
            if (!cfg.lp_modes.empty()) cps.push_back({"access", {"blocked"}});
            if (cfg.lp_modes.size() < 2) cps.push_back({"request", {"rejected"}});
            return cps;
        }
        case Scenario::fault_sweep: {
            std::vector<std::string> weights;
            const int max_w = std::max(1, cap.t_detect);
            for (int w = 1; w <= max_w; ++w) weights.push_back("w" + std::to_string(w));
            std::vector<std::string> flags;
            if (cap.t_correct > 0) flags.emplace_back("corrected");
            if (cap.t_detect > 0) flags.emplace_back("detected_uncorrectable");
            if (flags.empty()) flags.emplace_back("ok");
            return {{"weight", weights}, {"flag", flags}};
        }
        case Scenario::ecc_exhaustive: {
            std::vector<std::string> weights;
            for (int w = 0; w <= cap.t_correct + cap.t_detect; ++w) weights.push_back("w" + std::to_string(w));
            return {{"weight", weights}};
        }
        case Scenario::bus_decode_exhaustive: {
            std::vector<std::string> modes{"active"};
            for (LpMode m : cfg.lp_modes) modes.emplace_back(to_string(m));
            return {{"op", {"idle", "read", "write"}}, {"mode", modes}};
        }
    }
    return {};
}

GeneratedRegression generate_tests(std::span<const TestcaseRef> testcases, const IpConfiguration& cfg,
                                   std::uint64_t session_seed, const std::string& session_name) {
    GeneratedRegression out;
    out.session.name = session_name;
    out.session.seed = session_seed;

    for (const auto& tc : testcases) {
        TestDescriptor d;
        d.name = tc.id;
        if (tc.domain == rmt::Domain::formal) {
            bool skipped = false;
            auto scenario = formal_scenario(tc, cfg, skipped);
            if (skipped) {
                out.not_generated.push_back(tc.id);
                continue;
            }
            if (!scenario)
                fail(ErrorKind::validation, "formal testcase '" + tc.id + "' (\"" + tc.title + "\") maps to no exhaustive scenario");
            d.runner = Runner::exhaustive;
            d.scenario = *scenario;
            d.count = 1;
        } else {
            d.runner = Runner::sim;
            d.scenario = sim_scenario(tc);
            d.count = kDefaultSimCount;
        }
        d.coverpoints = declared_coverpoints(d.scenario, cfg);
        out.tests.push_back(std::move(d));
    }

    std::sort(out.tests.begin(), out.tests.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    std::sort(out.not_generated.begin(), out.not_generated.end());
    for (Runner group : {Runner::exhaustive, Runner::sim})
        for (const auto& t : out.tests)
            if (t.runner == group)
                out.session.tests.push_back({t.name, group == Runner::exhaustive ? "formal" : "sim", t.runner, t.count});
    out.session_text = write_session(out.session);
    return out;
}

}  // namespace reqflow::regression
