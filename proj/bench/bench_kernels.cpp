// Serial reference kernels against their OpenMP counterparts.

#include "reqflow/ecc.hpp"
#include "reqflow/ecc_kernels.hpp"
#include "reqflow/regression/generate.hpp"
#include "reqflow/regression/runner.hpp"

#include <benchmark/benchmark.h>

using namespace reqflow;

namespace {

void BM_MinDistanceSerial(benchmark::State& state) {
    const auto scheme = ecc::build_ecc(EccLevel::secded, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ecc::min_distance_serial(scheme));
}

void BM_MinDistanceParallel(benchmark::State& state) {
    const auto scheme = ecc::build_ecc(EccLevel::secded, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ecc::min_distance(scheme));
}

void BM_ScanSerial(benchmark::State& state) {
    const auto scheme = ecc::build_ecc(EccLevel::dected, static_cast<int>(state.range(0)));
    const auto samples = ecc::data_samples(scheme.data_bits(), 1000, 1);
    for (auto _ : state) benchmark::DoNotOptimize(ecc::scan_capability_serial(scheme, samples));
}

void BM_ScanParallel(benchmark::State& state) {
    const auto scheme = ecc::build_ecc(EccLevel::dected, static_cast<int>(state.range(0)));
    const auto samples = ecc::data_samples(scheme.data_bits(), 1000, 1);
    for (auto _ : state) benchmark::DoNotOptimize(ecc::scan_capability(scheme, samples));
}

IpConfiguration session_config() {
    IpConfiguration c;
    c.ip_name = "bench";
    c.data_width = 16;
    c.addr_words = 256;
    c.ecc = EccLevel::secded;
    c.lp_modes = {LpMode::retention, LpMode::shutdown};
    c.ahb_bursts = {Burst::single, Burst::incr4, Burst::incr8};
    return c;
}

regression::GeneratedRegression session_fixture(const IpConfiguration& cfg) {
    using rmt::Domain;
    const std::vector<regression::TestcaseRef> tcs{
        {"B-TC-001", "Random read/write traffic", Domain::simulation}, {"B-TC-002", "Burst sequencing", Domain::simulation},
        {"B-TC-003", "Power mode cycling", Domain::simulation},        {"B-TC-004", "Fault injection", Domain::simulation},
        {"B-TC-005", "ECC proof", Domain::formal},                      {"B-TC-006", "Bus decode proof", Domain::formal},
    };
    return regression::generate_tests(tcs, cfg, 1, "bench");
}

void BM_SessionSerial(benchmark::State& state) {
    const auto cfg = session_config();
    const auto g = session_fixture(cfg);
    for (auto _ : state) benchmark::DoNotOptimize(regression::run_session_serial(g.session_text, g.tests, cfg));
}

void BM_SessionParallel(benchmark::State& state) {
    const auto cfg = session_config();
    const auto g = session_fixture(cfg);
    for (auto _ : state) benchmark::DoNotOptimize(regression::run_session(g.session_text, g.tests, cfg));
}

}  // namespace

BENCHMARK(BM_MinDistanceSerial)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinDistanceParallel)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanSerial)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanParallel)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SessionSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SessionParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
