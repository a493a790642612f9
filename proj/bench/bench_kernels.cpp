#include <benchmark/benchmark.h>

#include "logistat/game/game.hpp"
#include "logistat/measures/empirical.hpp"
#include "logistat/sink/sink.hpp"

using namespace logistat;

namespace {

const DyadicRational kChaotic = DyadicRational::floor_at(parse_rational("3.9"), 52);

void BM_MonteCarlo(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_measure(kChaotic, state.range(0), 2000, 1));
}
void BM_MonteCarloSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_measure_serial(kChaotic, state.range(0), 2000, 1));
}

struct Sink3 {
  DyadicRational a;
  DiscreteMeasure mu;
};
const Sink3& sink3() {
  static Sink3 s = [] {
    const DyadicInterval w{DyadicRational::floor_at(parse_rational("3.8"), 64),
                           DyadicRational::ceil_at(parse_rational("3.9"), 64)};
    const auto cert = certify_sink(find_superattracting(w, 3, 60), DyadicRational(mpz_class(1), 1), 48);
    return Sink3{cert.sample_parameter, cert.sink_measure};
  }();
  return s;
}
const std::vector<std::uint64_t> kSchedule{10, 100, 1000};

void BM_Basin(benchmark::State& state) {
  const auto& s = sink3();
  for (auto _ : state)
    benchmark::DoNotOptimize(basin_samples(s.a, s.mu, state.range(0), 3, kSchedule, Rational(1, 64)));
}
void BM_BasinSerial(benchmark::State& state) {
  const auto& s = sink3();
  for (auto _ : state)
    benchmark::DoNotOptimize(basin_samples_serial(s.a, s.mu, state.range(0), 3, kSchedule, Rational(1, 64)));
}

const TestFunction kBump = TestFunction::trapezoid(Rational(1, 4), Rational(3, 8), Rational(5, 8), Rational(3, 4));

void BM_Sampler(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sampled_tau_average(3.9, kBump, state.range(0), 100000, 0));
}
void BM_SamplerSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sampled_tau_average_serial(3.9, kBump, state.range(0), 100000, 0));
}

}  // namespace

BENCHMARK(BM_MonteCarlo)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Basin)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BasinSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sampler)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SamplerSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
