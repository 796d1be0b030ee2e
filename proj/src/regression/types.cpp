#include "reqflow/regression/types.hpp"

#include "reqflow/error.hpp"
#include "reqflow/text.hpp"
#include "reqflow/xml.hpp"

#include <array>
#include <charconv>

namespace reqflow::regression {

namespace {

constexpr std::array<std::string_view, 2> kRunners{"sim", "exhaustive"};
constexpr std::array<std::string_view, 6> kScenarios{"ecc_exhaustive", "bus_decode_exhaustive", "burst_rw",
                                                     "random_rw",      "power_cycle",           "fault_sweep"};

std::uint64_t parse_u64(const std::string& s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) fail(ErrorKind::validation, "invalid unsigned integer '" + s + "'");
    return v;
}

}  // namespace

std::string_view to_string(Runner r) { return kRunners[static_cast<std::size_t>(r)]; }
std::string_view to_string(Scenario s) { return kScenarios[static_cast<std::size_t>(s)]; }

std::optional<Runner> parse_runner(std::string_view s) {
    for (std::size_t i = 0; i < kRunners.size(); ++i)
        if (kRunners[i] == s) return static_cast<Runner>(i);
    return std::nullopt;
}

std::optional<Scenario> parse_scenario(std::string_view s) {
    for (std::size_t i = 0; i < kScenarios.size(); ++i)
        if (kScenarios[i] == s) return static_cast<Scenario>(i);
    return std::nullopt;
}

std::vector<std::string> TestDescriptor::declared_bins() const {
    std::vector<std::string> out;
    for (const auto& cp : coverpoints)
        for (const auto& b : cp.bins) out.push_back(entity_bin(name, cp.name, b));
    return out;
}

std::size_t SessionResult::fails() const {
    std::size_t n = 0;
    for (const auto& r : runs)
        if (!r.passed) ++n;
    return n;
}

std::string entity_check(std::string_view test, std::string_view check) {
    return "chk." + std::string(test) + "." + std::string(check);
}

std::string entity_bin(std::string_view test, std::string_view point, std::string_view bin) {
    return "cov." + std::string(test) + "." + std::string(point) + "." + std::string(bin);
}

std::uint64_t run_seed(std::uint64_t session_seed, std::string_view test, std::uint32_t run_index) {
    return fnv1a64(std::to_string(session_seed) + "/" + std::string(test) + "/" + std::to_string(run_index));
}

std::string to_xml(const SessionResult& result) {
    xml::Writer w;
    w.open("session-result", {{"name", result.session_name},
                              {"config_tag", result.config_tag},
                              {"seed", std::to_string(result.session_seed)},
                              {"runs", std::to_string(result.runs.size())},
                              {"fails", std::to_string(result.fails())}});
    for (const auto& b : result.declared_bins) w.leaf("declared", {{"bin", b}});
    for (const auto& run : result.runs) {
        w.open("run", {{"test", run.test},
                       {"index", std::to_string(run.run_index)},
                       {"seed", std::to_string(run.seed)},
                       {"verdict", run.passed ? "pass" : "fail"},
                       {"cases", std::to_string(run.cases)}});
        for (const auto& c : run.checks) w.leaf("check", {{"name", c.name}, {"result", c.passed ? "pass" : "fail"}});
        for (const auto& h : run.bin_hits) w.leaf("hit", {{"bin", h}});
        if (!run.failure_log.empty()) w.text_element("log", run.failure_log);
        w.close();
    }
    return w.finish();
}

SessionResult read_session_result(std::string_view document) {
    const xml::Node root = xml::parse(document);
    if (root.name != "session-result") fail(ErrorKind::validation, "expected <session-result> root");
    SessionResult r;
    r.session_name = root.required_attr("name");
    r.config_tag = root.required_attr("config_tag");
    r.session_seed = parse_u64(root.required_attr("seed"));
    for (const auto* d : root.children_named("declared")) r.declared_bins.push_back(d->required_attr("bin"));
    for (const auto* n : root.children_named("run")) {
        RunResult run;
        run.test = n->required_attr("test");
        run.run_index = static_cast<std::uint32_t>(parse_u64(n->required_attr("index")));
        run.seed = parse_u64(n->required_attr("seed"));
        run.passed = n->required_attr("verdict") == "pass";
        run.cases = parse_u64(n->attr("cases").value_or("0"));
        for (const auto* c : n->children_named("check"))
            run.checks.push_back({c->required_attr("name"), c->required_attr("result") == "pass"});
        for (const auto* h : n->children_named("hit")) run.bin_hits.push_back(h->required_attr("bin"));
        run.failure_log = n->child_text("log");
        r.runs.push_back(std::move(run));
    }
    return r;
}

std::string descriptors_to_xml(const std::vector<TestDescriptor>& tests, const std::string& config_tag) {
    xml::Writer w;
    w.open("tests", {{"config_tag", config_tag}});
    for (const auto& t : tests) {
        w.open("test", {{"name", t.name},
                        {"runner", std::string(to_string(t.runner))},
                        {"scenario", std::string(to_string(t.scenario))},
                        {"count", std::to_string(t.count)}});
        for (const auto& cp : t.coverpoints) {
            w.open("coverpoint", {{"name", cp.name}});
            for (const auto& b : cp.bins) w.leaf("bin", {{"name", b}});
            w.close();
        }
        w.close();
    }
    return w.finish();
}

std::vector<TestDescriptor> read_descriptors(std::string_view document, std::string* config_tag) {
    const xml::Node root = xml::parse(document);
    if (root.name != "tests") fail(ErrorKind::validation, "expected <tests> root");
    if (config_tag) *config_tag = root.required_attr("config_tag");
    std::vector<TestDescriptor> out;
    for (const auto* n : root.children_named("test")) {
        TestDescriptor t;
        t.name = n->required_attr("name");
        auto runner = parse_runner(n->required_attr("runner"));
        auto scenario = parse_scenario(n->required_attr("scenario"));
        if (!runner || !scenario) fail(ErrorKind::validation, "test '" + t.name + "' has an invalid runner or scenario");
        t.runner = *runner;
        t.scenario = *scenario;
        t.count = static_cast<std::uint32_t>(parse_u64(n->required_attr("count")));
        for (const auto* cpn : n->children_named("coverpoint")) {
            Coverpoint cp;
            cp.name = cpn->required_attr("name");
            for (const auto* b : cpn->children_named("bin")) cp.bins.push_back(b->required_attr("name"));
            t.coverpoints.push_back(std::move(cp));
        }
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace reqflow::regression
