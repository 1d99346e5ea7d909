// OpenMP kernels against the serial direct-DFT reference on the default
// 1 s / 320 Hz workload. Run with OMP_NUM_THREADS to vary the thread count;
// the "_1thread" variants pin it to one inside the benchmark.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "scgtf/pct.hpp"
#include "scgtf/reference.hpp"
#include "scgtf/synth.hpp"
#include "scgtf/tfd.hpp"

namespace {

const scgtf::ComplexSignal& x1_analytic() {
  static const scgtf::ComplexSignal z = scgtf::analytic_signal(scgtf::gen_x1().signal);
  return z;
}

void run_threads(benchmark::State& state, int threads, auto&& fn) {
  const int saved = omp_get_max_threads();
  if (threads > 0) omp_set_num_threads(threads);
  for (auto _ : state) benchmark::DoNotOptimize(fn());
  omp_set_num_threads(saved);
}

void BM_stft_parallel(benchmark::State& s) {
  run_threads(s, 0, [] { return scgtf::stft(x1_analytic(), scgtf::WindowSpec::hann(128), 4, 512); });
}
void BM_stft_1thread(benchmark::State& s) {
  run_threads(s, 1, [] { return scgtf::stft(x1_analytic(), scgtf::WindowSpec::hann(128), 4, 512); });
}
void BM_stft_reference(benchmark::State& s) {
  run_threads(s, 0, [] { return scgtf::reference::stft(x1_analytic(), scgtf::WindowSpec::hann(128), 4, 512); });
}

void BM_spwvd_parallel(benchmark::State& s) {
  run_threads(s, 0, [] {
    return scgtf::spwvd(x1_analytic(), scgtf::WindowSpec::hann(31), scgtf::WindowSpec::hann(63), 1300);
  });
}
void BM_spwvd_1thread(benchmark::State& s) {
  run_threads(s, 1, [] {
    return scgtf::spwvd(x1_analytic(), scgtf::WindowSpec::hann(31), scgtf::WindowSpec::hann(63), 1300);
  });
}
void BM_spwvd_reference(benchmark::State& s) {
  const auto g = scgtf::make_window(scgtf::WindowSpec::hann(31));
  const auto h = scgtf::make_window(scgtf::WindowSpec::hann(63));
  run_threads(s, 0, [&] { return scgtf::reference::wigner(x1_analytic(), g, h, 1300); });
}

void BM_wvd_parallel(benchmark::State& s) {
  run_threads(s, 0, [] { return scgtf::wvd(x1_analytic(), 1300); });
}
void BM_wvd_1thread(benchmark::State& s) {
  run_threads(s, 1, [] { return scgtf::wvd(x1_analytic(), 1300); });
}

void BM_pct_estimate_parallel(benchmark::State& s) {
  run_threads(s, 0, [] { return scgtf::estimate_kernel(x1_analytic(), scgtf::PctConfig{}).iterations; });
}
void BM_pct_estimate_1thread(benchmark::State& s) {
  run_threads(s, 1, [] { return scgtf::estimate_kernel(x1_analytic(), scgtf::PctConfig{}).iterations; });
}

}  // namespace

BENCHMARK(BM_stft_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_stft_1thread)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_stft_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_wvd_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_wvd_1thread)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_spwvd_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_spwvd_1thread)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_spwvd_reference)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK(BM_pct_estimate_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_pct_estimate_1thread)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
