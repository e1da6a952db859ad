// Serial reference vs OpenMP kernels. Pass --benchmark_filter to narrow.

#include <benchmark/benchmark.h>

#include <map>

#include "qecc/distances.hpp"
#include "qecc/estimation.hpp"
#include "qecc/interleavers.hpp"
#include "qecc/sim_harness.hpp"
#include "qecc/small_codes.hpp"

using namespace qecc;

namespace {

const Permutation& perm(std::size_t n) {
  static std::map<std::size_t, Permutation> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    Rng rng(1);
    it = cache.emplace(n, random_interleaver(n, rng)).first;
  }
  return it->second;
}

void BM_dispersion_serial(benchmark::State& st) {
  const auto& p = perm(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(dispersion_serial(p));
}
void BM_dispersion(benchmark::State& st) {
  const auto& p = perm(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(dispersion(p));
}
BENCHMARK(BM_dispersion_serial)->Arg(500)->Arg(1500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dispersion)->Arg(500)->Arg(1500)->Unit(benchmark::kMillisecond);

const TruncGauss kT1{1.0, 0.25, 0.0};

void BM_diamond_tv_serial(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(mean_diamond_tv_serial(0.2, 1.0, kT1, ChannelKind::ADCTA, st.range(0), 7).mean);
}
void BM_diamond_tv(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(mean_diamond_tv(0.2, 1.0, kT1, ChannelKind::ADCTA, st.range(0), 7).mean);
}
BENCHMARK(BM_diamond_tv_serial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_diamond_tv)->Arg(100000)->Unit(benchmark::kMillisecond);

const StabilizerCode& code5() {
  static const StabilizerCode c = five_qubit_code();
  return c;
}

void BM_posterior_serial(benchmark::State& st) {
  const auto p = pauli_from_alpha(0.1, 5.0);
  for (auto _ : st)
    for (std::uint32_t s = 0; s < 16; ++s) benchmark::DoNotOptimize(posterior_marginals_serial(code5(), s, p));
}
void BM_posterior(benchmark::State& st) {
  const auto p = pauli_from_alpha(0.1, 5.0);
  for (auto _ : st)
    for (std::uint32_t s = 0; s < 16; ++s) benchmark::DoNotOptimize(posterior_marginals(code5(), s, p));
}
BENCHMARK(BM_posterior_serial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_posterior)->Unit(benchmark::kMicrosecond);

void BM_online_mc_serial(benchmark::State& st) {
  const auto t = PauliChannelParams::depolarizing(0.05);
  const auto init = online_default_init(code5(), EstimatorKind::Depolarizing);
  for (auto _ : st)
    benchmark::DoNotOptimize(
        online_monte_carlo_serial(code5(), t, init, EstimatorKind::Depolarizing, st.range(0), 3).p_hat());
}
void BM_online_mc(benchmark::State& st) {
  const auto t = PauliChannelParams::depolarizing(0.05);
  const auto init = online_default_init(code5(), EstimatorKind::Depolarizing);
  for (auto _ : st)
    benchmark::DoNotOptimize(online_monte_carlo(code5(), t, init, EstimatorKind::Depolarizing, st.range(0), 3).p_hat());
}
BENCHMARK(BM_online_mc_serial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_online_mc)->Arg(100000)->Unit(benchmark::kMillisecond);

HarnessOptions wer_opts() {
  HarnessOptions o;
  o.stop.min_errors = 200;
  return o;
}
void BM_toric_wer_serial(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(
        run_static_wer_serial(DecoderTask::toric(static_cast<int>(st.range(0))), ChannelSpec::depolarizing(0.06), wer_opts())
            .wer);
}
void BM_toric_wer(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(
        run_static_wer(DecoderTask::toric(static_cast<int>(st.range(0))), ChannelSpec::depolarizing(0.06), wer_opts()).wer);
}
BENCHMARK(BM_toric_wer_serial)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_toric_wer)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
