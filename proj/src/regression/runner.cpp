#include "reqflow/regression/runner.hpp"

#include "reqflow/ecc.hpp"
#include "reqflow/error.hpp"
#include "reqflow/regression/session.hpp"
#include "reqflow/text.hpp"
#include "scenarios.hpp"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <map>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace reqflow::regression {

namespace fs = std::filesystem;

RunResult run_test(const TestDescriptor& test, const IpConfiguration& cfg, std::uint32_t run_index,
                   std::uint64_t session_seed) {
    const std::uint64_t seed = run_seed(session_seed, test.name, run_index);
    detail::Recorder rec(test.name);
    detail::Rng rng(seed);
    switch (test.scenario) {
        case Scenario::random_rw: detail::random_rw(cfg, rng, rec); break;
        case Scenario::burst_rw: detail::burst_rw(cfg, rng, rec); break;
        case Scenario::power_cycle: detail::power_cycle(cfg, rng, rec); break;
        case Scenario::fault_sweep: detail::fault_sweep(cfg, rng, rec); break;
        case Scenario::ecc_exhaustive: detail::ecc_exhaustive(cfg, seed, rec); break;
        case Scenario::bus_decode_exhaustive: detail::bus_decode_exhaustive(cfg, rec); break;
    }
    return rec.finish(run_index, seed);
}

std::uint64_t exhaustive_case_count(Scenario scenario, const IpConfiguration& cfg) {
    switch (scenario) {
        case Scenario::bus_decode_exhaustive:
            return 3 * cfg.ahb_bursts.size() * 5 * (1 + cfg.lp_modes.size());
        case Scenario::ecc_exhaustive: {
            const auto scheme = ecc::build_ecc(cfg.ecc, cfg.data_width);
            const auto cap = scheme.capability();
            const std::uint64_t samples = cfg.data_width <= 8 ? (std::uint64_t{1} << cfg.data_width) : 64;
            std::uint64_t patterns = 0;
            const int n = scheme.code_bits();
            for (int w = 0; w <= cap.t_correct + cap.t_detect; ++w) {
                std::uint64_t c = 1;  // n choose w
                for (int i = 0; i < w; ++i) c = c * static_cast<std::uint64_t>(n - i) / static_cast<std::uint64_t>(i + 1);
                patterns += c;
            }
            return samples * patterns;
        }
        default:
            fail(ErrorKind::validation, "scenario " + std::string(to_string(scenario)) + " is not exhaustive");
    }
}

namespace {

struct Unit {
    const TestDescriptor* test;
    std::uint32_t run_index;
};

struct Plan {
    SessionResult shell;
    std::vector<Unit> units;  // sorted by (test, run_index)
};

Plan plan_session(std::string_view session_text, std::span<const TestDescriptor> tests, const IpConfiguration& cfg) {
    const SessionSpec spec = parse_session(session_text);
    std::map<std::string, const TestDescriptor*> by_name;
    for (const auto& t : tests) by_name.emplace(t.name, &t);

    Plan plan;
    plan.shell.session_name = spec.name;
    plan.shell.config_tag = config_tag(cfg);
    plan.shell.session_seed = spec.seed;
    std::vector<std::string> bins;
    for (const auto& st : spec.tests) {
        auto it = by_name.find(st.name);
        if (it == by_name.end()) fail(ErrorKind::validation, "session test " + st.name + " has no test descriptor");
        if (it->second->runner != st.runner)
            fail(ErrorKind::validation, "session test " + st.name + " runner does not match its descriptor");
        for (std::uint32_t i = 0; i < st.count; ++i) plan.units.push_back({it->second, i});
        for (auto& b : it->second->declared_bins()) bins.push_back(std::move(b));
    }
    std::sort(bins.begin(), bins.end());
    bins.erase(std::unique(bins.begin(), bins.end()), bins.end());
    plan.shell.declared_bins = std::move(bins);
    std::sort(plan.units.begin(), plan.units.end(), [](const Unit& a, const Unit& b) {
        return std::tie(a.test->name, a.run_index) < std::tie(b.test->name, b.run_index);
    });
    return plan;
}

// An exception inside a run is a test failure, not a crash of the session.
RunResult guarded_run(const Unit& u, const IpConfiguration& cfg, std::uint64_t session_seed) {
    try {
        return run_test(*u.test, cfg, u.run_index, session_seed);
    } catch (const std::exception& e) {
        RunResult r;
        r.test = u.test->name;
        r.run_index = u.run_index;
        r.seed = run_seed(session_seed, u.test->name, u.run_index);
        r.passed = false;
        r.checks.push_back({entity_check(u.test->name, "no_exception"), false});
        r.failure_log = std::string("[no_exception] ") + e.what() + "\n";
        return r;
    }
}

}  // namespace

SessionResult run_session(std::string_view session_text, std::span<const TestDescriptor> tests,
                          const IpConfiguration& cfg, int jobs) {
    Plan plan = plan_session(session_text, tests, cfg);
    std::vector<RunResult> runs(plan.units.size());
    const auto n = static_cast<std::int64_t>(plan.units.size());
#ifdef _OPENMP
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#else
    (void)jobs;
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        runs[static_cast<std::size_t>(i)] = guarded_run(plan.units[static_cast<std::size_t>(i)], cfg, plan.shell.session_seed);
    }
    plan.shell.runs = std::move(runs);
    return plan.shell;
}

SessionResult run_session_serial(std::string_view session_text, std::span<const TestDescriptor> tests,
                                 const IpConfiguration& cfg, std::span<const std::size_t> order) {
    Plan plan = plan_session(session_text, tests, cfg);
    std::vector<std::size_t> seq(plan.units.size());
    if (order.empty()) {
        std::iota(seq.begin(), seq.end(), std::size_t{0});
    } else {
        if (order.size() != seq.size()) fail(ErrorKind::validation, "execution order is not a permutation of the run list");
        seq.assign(order.begin(), order.end());
        std::vector<std::size_t> check = seq;
        std::sort(check.begin(), check.end());
        for (std::size_t i = 0; i < check.size(); ++i)
            if (check[i] != i) fail(ErrorKind::validation, "execution order is not a permutation of the run list");
    }
    std::vector<RunResult> runs(plan.units.size());
    for (auto i : seq) runs[i] = guarded_run(plan.units[i], cfg, plan.shell.session_seed);
    plan.shell.runs = std::move(runs);
    return plan.shell;
}

FailureBundle collect_failures(const SessionResult& result, const std::string& out_dir) {
    FailureBundle bundle;
    try {
        const fs::path dir = fs::path(out_dir) / "failures";
        fs::remove_all(dir);
        fs::create_directories(dir);
        bundle.directory = dir.string();
        std::string summary = std::to_string(result.fails()) + " failures\n";
        for (const auto& run : result.runs) {
            if (run.passed) continue;
            const fs::path log = dir / (run.test + ".run" + std::to_string(run.run_index) + ".log");
            std::string body = "test " + run.test + " run " + std::to_string(run.run_index) + " seed " +
                               std::to_string(run.seed) + "\n";
            for (const auto& c : run.checks)
                if (!c.passed) body += "failed check " + c.name + "\n";
            body += run.failure_log;
            write_file_atomic(log.string(), body);
            bundle.logs.push_back(log.string());
            summary += run.test + " run " + std::to_string(run.run_index) + " seed " + std::to_string(run.seed) + " " +
                       log.filename().string() + "\n";
        }
        bundle.summary_path = (dir / "summary.txt").string();
        write_file_atomic(bundle.summary_path, summary);
        bundle.exit_code = result.fails() == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        bundle.exit_code = 2;
        bundle.error = e.what();
    }
    return bundle;
}

}  // namespace reqflow::regression
