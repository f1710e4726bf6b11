// Serial reference vs OpenMP scoring kernels, plus the two prioritizer modes,
// on a synthetic landscape.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "mbrc/prioritizer.hpp"
#include "mbrc/synthetic.hpp"

namespace {

struct Fixture {
  mbrc::Scenario scenario;
  mbrc::PreparedScenario prepared;
  std::vector<std::uint8_t> alive;
  std::vector<std::int64_t> habitat, potential;
  std::vector<mbrc::CandidateScore> scores;

  explicit Fixture(std::size_t side) {
    mbrc::SyntheticParams p;
    p.rows = p.cols = side;
    p.n_species = 50;
    scenario = mbrc::gen_synthetic(7, p);
    prepared = mbrc::prepare(scenario);
    prepared.scenario = &scenario;
    alive.assign(prepared.candidates.size(), 1);
    habitat = prepared.species.habitat();
    potential = prepared.species.potential();
    scores.resize(prepared.candidates.size());
  }

  mbrc::HabitatView view() const { return {habitat, potential, 0.25, habitat.size()}; }
};

Fixture& fixture(std::size_t side) {
  static Fixture f100(100), f200(200);
  return side == 100 ? f100 : f200;
}

void BM_ScoreSerial(benchmark::State& state) {
  auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    mbrc::kernels::score_all_serial(f.prepared.candidates, f.alive, f.view(), f.scores);
    benchmark::DoNotOptimize(mbrc::kernels::select_best_serial(f.prepared.candidates, f.alive, f.scores));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.prepared.candidates.size()));
}

void BM_ScoreParallel(benchmark::State& state) {
  auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) {
    mbrc::kernels::score_all_parallel(f.prepared.candidates, f.alive, f.view(), f.scores);
    benchmark::DoNotOptimize(mbrc::kernels::select_best_parallel(f.prepared.candidates, f.alive, f.scores));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.prepared.candidates.size()));
}

void BM_Sequence(benchmark::State& state) {
  mbrc::SyntheticParams p;
  p.rows = p.cols = 40;
  p.n_species = 20;
  const auto scenario = mbrc::gen_synthetic(11, p);
  const auto prepared = mbrc::prepare(scenario);
  mbrc::SequenceOptions opt;
  opt.mode = state.range(0) == 0 ? mbrc::PrioritizerMode::kExact : mbrc::PrioritizerMode::kLazy;
  for (auto _ : state) benchmark::DoNotOptimize(mbrc::build_sequence(prepared, 0.25, opt).steps.size());
}

}  // namespace

BENCHMARK(BM_ScoreSerial)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreParallel)->ArgsProduct({{100, 200}, {1, 2, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sequence)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
