// OpenMP kernels against their serial references, plus one full RK4 step.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "bhblow/evolve.hpp"
#include "bhblow/initial_data.hpp"
#include "bhblow/kernels.hpp"

namespace k = bhblow::kernels;

namespace {

std::vector<double> ramp(std::size_t n, double phase) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(1e-3 * static_cast<double>(i) + phase);
  return v;
}

template <auto Fn>
void bm_multiply(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto a = ramp(n, 0.1), b = ramp(n, 0.7);
  std::vector<double> out(n);
  for (auto _ : st) {
    Fn(a, b, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetBytesProcessed(static_cast<std::int64_t>(st.iterations() * n * 3 * sizeof(double)));
}

template <auto Fn>
void bm_rk4(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto u = ramp(n, 0.0), k1 = ramp(n, 0.1), k2 = ramp(n, 0.2), k3 = ramp(n, 0.3), k4 = ramp(n, 0.4);
  std::vector<double> out(n);
  for (auto _ : st) {
    Fn(u, k1, k2, k3, k4, 1e-4, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <auto Fn>
void bm_sum_squares(benchmark::State& st) {
  const auto a = ramp(static_cast<std::size_t>(st.range(0)), 0.3);
  for (auto _ : st) benchmark::DoNotOptimize(Fn(a));
}

template <auto Fn>
void bm_argmin(benchmark::State& st) {
  const auto a = ramp(static_cast<std::size_t>(st.range(0)), 0.3);
  for (auto _ : st) benchmark::DoNotOptimize(Fn(a));
}

template <auto Fn>
void bm_trig_eval(benchmark::State& st) {
  const std::size_t n = 4096, q = static_cast<std::size_t>(st.range(0));
  std::vector<k::cplx> spec(n / 2 + 1);
  for (std::size_t j = 0; j < spec.size(); ++j) spec[j] = {std::exp(-0.01 * j), 0.0};
  std::vector<double> xs(q), out(q * 4);
  for (std::size_t i = 0; i < q; ++i) xs[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(q);
  for (auto _ : st) {
    Fn(spec, k::TrigBasis{n, 1.0}, xs, 3, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void bm_full_step(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  bhblow::DataSpec d;
  d.epsilon = 0.1;
  const auto u0 = bhblow::build_u0(d, bhblow::make_grid(n, 4.0));
  for (auto _ : st) {
    auto r = bhblow::step_dt(bhblow::PhysState{-0.1, u0}, 1e-5, bhblow::Mode::full);
    benchmark::DoNotOptimize(r.t);
  }
}

}  // namespace

BENCHMARK(bm_multiply<k::serial::multiply>)->Name("multiply/serial")->Range(1 << 12, 1 << 20);
BENCHMARK(bm_multiply<k::omp::multiply>)->Name("multiply/omp")->Range(1 << 12, 1 << 20);
BENCHMARK(bm_rk4<k::serial::rk4_combine>)->Name("rk4_combine/serial")->Range(1 << 12, 1 << 20);
BENCHMARK(bm_rk4<k::omp::rk4_combine>)->Name("rk4_combine/omp")->Range(1 << 12, 1 << 20);
BENCHMARK(bm_sum_squares<k::serial::sum_squares>)->Name("sum_squares/serial")->Range(1 << 12, 1 << 20);
BENCHMARK(bm_sum_squares<k::omp::sum_squares>)->Name("sum_squares/omp")->Range(1 << 12, 1 << 20);
BENCHMARK(bm_argmin<k::serial::argmin>)->Name("argmin/serial")->Range(1 << 12, 1 << 20);
BENCHMARK(bm_argmin<k::omp::argmin>)->Name("argmin/omp")->Range(1 << 12, 1 << 20);
BENCHMARK(bm_trig_eval<k::serial::trig_eval>)->Name("trig_eval/serial")->Range(64, 1024);
BENCHMARK(bm_trig_eval<k::omp::trig_eval>)->Name("trig_eval/omp")->Range(64, 1024);
BENCHMARK(bm_full_step)->Name("rk4_step/full")->Range(1 << 12, 1 << 18)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
