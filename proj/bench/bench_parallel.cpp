// Serial reference against the OpenMP kernels. Arg 0 = serial, 1 = parallel.
// Thread count from OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "zm/atkinson.hpp"
#include "zm/divisor.hpp"
#include "zm/kirillov_real.hpp"
#include "zm/moment4.hpp"
#include "zm/suites.hpp"
#include "zm/weights.hpp"

using namespace zm;

namespace {

Exec mode(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

void atkinson_tail(benchmark::State& st) {
    QuadratureSpec qs;
    Weight g = gaussian_weight(2.0);
    for (auto _ : st) benchmark::DoNotOptimize(atkinson_terms(g, 1, 400, qs, mode(st)));
}

void divisor_brute_force(benchmark::State& st) {
    DivisorProblem p;
    p.lambda = cplx(0.1, 0.2);
    p.mu = cplx(-0.05, 1.0);
    p.shift_f = 20000;
    p.W = bump_weight(1.0, 9.0);
    for (auto _ : st) benchmark::DoNotOptimize(brute_force_sum(p, 180000, mode(st)));
}

void theta_batch(benchmark::State& st) {
    QuadratureSpec qs;
    Weight g = gaussian_weight(1.0);
    std::vector<cplx> nus;
    for (int i = 1; i <= 16; ++i) nus.emplace_back(0.0, 0.5 * i);
    for (auto _ : st) {
        theta_cache_clear();
        benchmark::DoNotOptimize(theta_real_batch(nus, g, qs, mode(st)));
    }
}

void hankel_grid(benchmark::State& st) {
    QuadratureSpec qs;
    for (auto _ : st)
        benchmark::DoNotOptimize(
            verify_hankel_grid({0, 1, 2, -1}, {cplx(0, 1), cplx(0, 3)}, {0.5, -2.0}, qs, 1e-6, mode(st)));
}

void suite_fan_out(benchmark::State& st) {
    SuiteOptions opt;
    opt.exec = mode(st);
    for (auto _ : st) benchmark::DoNotOptimize(run_suite("kirillov-real", opt));
}

}  // namespace

BENCHMARK(atkinson_tail)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(divisor_brute_force)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(theta_batch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(hankel_grid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(suite_fan_out)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
