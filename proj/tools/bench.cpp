// Throughput comparison between the serial reference path (--jobs 1) and the
// OpenMP path for the batch workloads: ensemble verification, counterexample
// hunting, and conjugation-search restarts.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "oplab/generators.hpp"
#include "oplab/parallel.hpp"
#include "oplab/theorems.hpp"

using namespace oplab;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double bench_verify(int jobs, std::size_t count) {
    AnalysisOptions opts;
    opts.seed = 2024;
    const RandomSpec spec = make_spec("involution", 4, 2, opts.seed, count);
    const auto t0 = std::chrono::steady_clock::now();
    run_suite(spec, all_theorem_ids(), opts, jobs);
    return seconds_since(t0);
}

double bench_hunt(int jobs, std::size_t budget) {
    AnalysisOptions opts;
    opts.seed = 2024;
    const TargetExpr target = TargetExpr::parse("binormal & !binormal@T2");
    const RandomSpec spec = make_spec("integer_dense", 3, 1, opts.seed, budget);
    const auto t0 = std::chrono::steady_clock::now();
    hunt(target, spec, budget, opts, jobs);
    return seconds_since(t0);
}

double bench_oracle(int jobs, std::size_t count) {
    AnalysisOptions opts;
    opts.seed = 2024;
    const RandomSpec spec = make_spec("unitary_conjugate:normal", 5, 2, opts.seed, count);
    CsOptions cs = opts.cs_options();
    cs.jobs = jobs;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < count; ++i) classify_cs(generate(spec, i), cs);
    return seconds_since(t0);
}

void row(const char* name, double serial, double parallel, int jobs) {
    std::printf("%-28s %10.3fs %10.3fs   x%.2f (jobs=%d)\n", name, serial, parallel,
                parallel > 0 ? serial / parallel : 0.0, jobs);
}

} // namespace

int main(int argc, char** argv) {
    int jobs = 0; // all cores
    std::size_t scale = 1;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--jobs" && i + 1 < argc) jobs = std::atoi(argv[++i]);
        if (arg == "--scale" && i + 1 < argc) scale = std::strtoull(argv[++i], nullptr, 10);
    }
    const int workers = resolve_jobs(jobs);
    std::printf("workloads: serial reference vs OpenMP (%d workers)\n", workers);
    std::printf("%-28s %11s %11s\n", "workload", "serial", "parallel");

    {
        const std::size_t count = 64 * scale;
        const double s = bench_verify(1, count);
        const double p = bench_verify(jobs == 1 ? 0 : jobs, count);
        row("verify involution n=4", s, p, workers);
    }
    {
        const std::size_t budget = 20000 * scale;
        const double s = bench_hunt(1, budget);
        const double p = bench_hunt(jobs == 1 ? 0 : jobs, budget);
        row("hunt integer_dense n=3", s, p, workers);
    }
    {
        const std::size_t count = 24 * scale;
        const double s = bench_oracle(1, count);
        const double p = bench_oracle(jobs == 1 ? 0 : jobs, count);
        row("classify_cs rotated normal", s, p, workers);
    }
    return 0;
}
