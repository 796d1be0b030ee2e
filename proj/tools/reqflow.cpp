// Command-line entry point: the full flow plus each step on its own.

#include "reqflow/error.hpp"
#include "reqflow/flow.hpp"
#include "reqflow/rmt/http.hpp"
#include "reqflow/rmt/service.hpp"
#include "reqflow/rmt/store.hpp"
#include "reqflow/text.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <ctime>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;
using namespace reqflow;

namespace {

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : fallback;
}

IpConfiguration load_config(const std::string& path) { return parse_config(read_file(path)); }

std::pair<std::string, int> split_bind(const std::string& bind) {
    const auto colon = bind.rfind(':');
    if (colon == std::string::npos) fail(ErrorKind::validation, "--bind expects host:port, got '" + bind + "'");
    try {
        return {bind.substr(0, colon), std::stoi(bind.substr(colon + 1))};
    } catch (const std::logic_error&) {
        fail(ErrorKind::validation, "--bind expects host:port, got '" + bind + "'");
    }
}

void print_outcome(const flow::FlowOutcome& o) {
    for (const char* step : flow::kSteps) std::cout << step << ": " << flow::to_string(o.steps.at(step)) << "\n";
    if (!o.config_tag.empty()) std::cout << "config_tag: " << o.config_tag << "\n";
    if (o.exit_code != 2) {
        std::cout << "runs: " << o.runs << ", fails: " << o.fails << "\n";
        std::cout << "report: " << o.archive_link << "\n";
    } else {
        std::cerr << "error: " << o.error << "\n";
    }
}

int serve(const std::string& store_path, const std::string& bind) {
    const auto [host, port] = split_bind(bind);
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);  // inherited by server threads

    auto service = rmt::StoreService::open(store_path);
    rmt::HttpFacade facade(*service);
    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        facade.stop();
    });
    std::cout << "serving " << store_path << " on " << host << ":" << port << std::endl;
    const bool ok = facade.listen(host, port);
    if (!ok) {
        std::cerr << "error: cannot bind " << bind << "\n";
        pthread_kill(waiter.native_handle(), SIGTERM);
    }
    waiter.join();
    service->flush();
    return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Requirements-driven verification flow for a configurable memory subsystem"};
    app.require_subcommand(1);

    std::string config, matrix, bind = "127.0.0.1:8080";
    std::string superset = flow::default_superset_path();
    std::string out = "out";
    std::string store = env_or("REQFLOW_STORE", "");
    std::string archive = env_or("REQFLOW_ARCHIVE", "");
    std::uint64_t seed = 1;
    bool stamp = false;
    int jobs = 0;

    auto add_config = [&](CLI::App* c) { c->add_option("--config", config, "IP configuration file")->required(); };
    auto add_out = [&](CLI::App* c) { c->add_option("--out", out, "Output directory")->capture_default_str(); };
    auto add_store = [&](CLI::App* c) { c->add_option("--store", store, "Requirements store file (env REQFLOW_STORE)"); };
    auto add_superset = [&](CLI::App* c) { c->add_option("--superset", superset, "Superset fixture")->capture_default_str(); };
    auto add_report_opts = [&](CLI::App* c) {
        c->add_option("--archive", archive, "Report archive directory (env REQFLOW_ARCHIVE)");
        c->add_flag("--stamp", stamp, "Add a generation timestamp to the HTML report");
    };

    auto* flow_cmd = app.add_subcommand("flow", "Run derive, plan, generate, run and report end to end");
    add_config(flow_cmd);
    add_superset(flow_cmd);
    add_out(flow_cmd);
    add_store(flow_cmd);
    add_report_opts(flow_cmd);
    flow_cmd->add_option("--seed", seed, "Session seed")->capture_default_str();
    flow_cmd->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

    auto* derive_cmd = app.add_subcommand("derive", "Derive the configuration subset and export ipvs.xml");
    add_config(derive_cmd);
    add_superset(derive_cmd);
    add_out(derive_cmd);
    add_store(derive_cmd);

    auto* plan_cmd = app.add_subcommand("plan", "Build vplan.xml from ipvs.xml");
    add_out(plan_cmd);

    auto* gen_cmd = app.add_subcommand("generate", "Generate tests.xml and session.vsif from ipvs.xml");
    add_config(gen_cmd);
    add_out(gen_cmd);
    gen_cmd->add_option("--seed", seed, "Session seed")->capture_default_str();

    auto* run_cmd = app.add_subcommand("run", "Execute session.vsif and collect failures");
    add_config(run_cmd);
    add_out(run_cmd);
    run_cmd->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

    auto* report_cmd = app.add_subcommand("report", "Roll up results, emit and archive reports, push to the store");
    add_out(report_cmd);
    add_store(report_cmd);
    add_report_opts(report_cmd);

    auto* serve_cmd = app.add_subcommand("serve", "Serve the requirements store over HTTP");
    add_store(serve_cmd);
    serve_cmd->add_option("--bind", bind, "host:port")->capture_default_str();

    auto* sweep_cmd = app.add_subcommand("sweep", "Run the flow over every configuration of a matrix");
    sweep_cmd->add_option("--matrix", matrix, "Configuration matrix")->required();
    add_superset(sweep_cmd);
    add_out(sweep_cmd);
    add_report_opts(sweep_cmd);
    sweep_cmd->add_option("--seed", seed, "Session seed")->capture_default_str();
    sweep_cmd->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

    auto* init_cmd = app.add_subcommand("init-superset", "Load the superset fixture into a store");
    add_superset(init_cmd);
    add_store(init_cmd);

    CLI11_PARSE(app, argc, argv);

    auto store_or = [&](const std::string& fallback) { return store.empty() ? fallback : store; };
    auto archive_or = [&](const std::string& fallback) { return archive.empty() ? fallback : archive; };
    auto stamp_value = [&]() -> std::optional<std::string> {
        if (!stamp) return std::nullopt;
        const std::time_t now = std::time(nullptr);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        return std::string(buf);
    };

    try {
        if (*flow_cmd) {
            flow::FlowOptions o;
            o.config_path = config;
            o.superset_path = superset;
            o.out_dir = out;
            o.seed = seed;
            o.jobs = jobs;
            o.stamp = stamp_value();
            if (!store.empty()) o.store_path = store;
            if (!archive.empty()) o.archive_dir = archive;
            const auto outcome = flow::run_flow(o);
            print_outcome(outcome);
            return outcome.exit_code;
        }
        if (*derive_cmd) {
            const auto cfg = load_config(config);
            auto service = rmt::StoreService::open(store_or((fs::path(out) / "store.xml").string()));
            flow::ensure_superset(*service, superset);
            const auto r = flow::step_derive(*service, cfg, out);
            std::cout << "config_tag: " << r.config_tag << "\nhwrqs: " << r.hwrqs << ", testcases: " << r.testcases
                      << ", waivers: " << r.waivers << "\n";
            for (const auto& id : r.waiver_required) std::cout << "waiver required: " << id << "\n";
            return 0;
        }
        if (*plan_cmd) {
            flow::step_plan(out);
            return 0;
        }
        if (*gen_cmd) {
            flow::step_generate(load_config(config), seed, out);
            return 0;
        }
        if (*run_cmd) {
            const int code = flow::step_run(load_config(config), jobs, out);
            std::cout << read_file((fs::path(out) / "failures" / "summary.txt").string());
            return code;
        }
        if (*report_cmd) {
            auto service = rmt::StoreService::open(store_or((fs::path(out) / "store.xml").string()));
            rmt::ServiceSink sink(*service);
            const auto r = flow::step_report(sink, out, archive_or((fs::path(out) / "archive").string()), stamp_value());
            std::cout << "pushed " << r.pushed << " testcase results\nreport: " << r.link << "\n";
            return r.fails == 0 ? 0 : 1;
        }
        if (*serve_cmd) return serve(store_or("store.xml"), bind);
        if (*sweep_cmd) {
            flow::FlowOptions base;
            base.superset_path = superset;
            base.out_dir = out;
            base.seed = seed;
            base.jobs = jobs;
            base.stamp = stamp_value();
            if (!archive.empty()) base.archive_dir = archive;
            const auto rows = flow::run_sweep(matrix, base);
            std::size_t clean = 0;
            for (const auto& r : rows) clean += r.exit_code == 0;
            std::cout << rows.size() << " configurations, " << clean << " clean\n";
            return clean == rows.size() ? 0 : 1;
        }
        if (*init_cmd) {
            auto service = rmt::StoreService::open(store_or("store.xml"));
            flow::ensure_superset(*service, superset);
            std::cout << "store holds " << service->read([](const rmt::Store& s) { return s.items().size(); }) << " items\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
