#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "vnfp/metrics.hpp"
#include "vnfp/objective_models.hpp"
#include "vnfp/routing_tables.hpp"
#include "vnfp/search.hpp"

using namespace vnfp;

namespace {

struct Setup {
  ProblemInstance problem;
  std::vector<Solution> population;

  explicit Setup(std::uint32_t k) {
    auto topo = std::make_shared<const Topology>(build_fat_tree(k));
    auto tables = std::make_shared<const TableSet>(build_table_set(*topo, {}));
    ProblemParams params;
    params.n_services = 6;
    problem = random_problem(topo, tables, params, 1);
    std::mt19937_64 rng(1);
    population = initialize_population(problem, 20, ObjectiveModel::plus, rng);
  }
};

const Setup& fat_tree_8() {
  static const Setup s(8);
  return s;
}

void BM_TableBuild(benchmark::State& state) {
  const auto t = build_fat_tree(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_table_set(t, {}));
  state.SetLabel(std::to_string(t.n_servers()) + " servers");
}
BENCHMARK(BM_TableBuild)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Mapping(benchmark::State& state) {
  const auto& s = fat_tree_8();
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& sol = s.population[i++ % s.population.size()];
    std::mt19937_64 rng(sol.eval_seed);
    benchmark::DoNotOptimize(map_genotype(s.problem, sol.genotype, rng));
  }
}
BENCHMARK(BM_Mapping);

void BM_Evaluate(benchmark::State& state) {
  const auto& s = fat_tree_8();
  const auto model = static_cast<ObjectiveModel>(state.range(0));
  std::vector<Placement> placements;
  for (const auto& sol : s.population) {
    std::mt19937_64 rng(sol.eval_seed);
    placements.push_back(map_genotype(s.problem, sol.genotype, rng).placement);
  }
  std::size_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(evaluate_placement(placements[i++ % placements.size()], s.problem, model));
  state.SetLabel(std::string(to_string(model)));
}
BENCHMARK(BM_Evaluate)->DenseRange(0, 6);

void BM_Hypervolume(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto m = static_cast<std::size_t>(state.range(0));
  std::vector<Point> pts(static_cast<std::size_t>(state.range(1)), Point(m));
  for (auto& p : pts)
    for (auto& x : p) x = u(rng);
  const std::vector<double> ref(m, kReferenceCoordinate);
  for (auto _ : state) benchmark::DoNotOptimize(hypervolume(pts, ref));
}
BENCHMARK(BM_Hypervolume)->Args({2, 200})->Args({3, 50})->Args({3, 200});

}  // namespace

BENCHMARK_MAIN();
