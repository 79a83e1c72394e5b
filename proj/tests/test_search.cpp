#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <set>
#include <stdexcept>

#include "vnfp/search.hpp"

using namespace vnfp;

namespace {

ProblemInstance fat_tree_problem(std::uint64_t seed, std::uint32_t services = 3) {
  auto topo = std::make_shared<const Topology>(build_fat_tree(4));
  auto tables = std::make_shared<const TableSet>(build_table_set(*topo, {}));
  ProblemParams params;
  params.n_services = services;
  return random_problem(topo, tables, params, seed);
}

Solution feasible_with(std::vector<double> f) {
  Solution s;
  s.objectives = ObjectiveVector{ObjectiveModel::accurate, std::move(f)};
  s.feasibility.feasible = true;
  return s;
}

Solution infeasible_with(std::uint32_t without, std::uint32_t unplaced) {
  Solution s;
  s.feasibility.feasible = false;
  s.feasibility.services_without_instances = without;
  s.feasibility.unplaced_instances = unplaced;
  return s;
}

std::vector<Point> feasible_points(const Archive& a) {
  std::vector<Point> out;
  for (const auto& s : a.solutions())
    if (s.feasible()) out.push_back(s.objectives->values);
  return out;
}

}  // namespace

TEST_CASE("simplex-lattice weights") {
  const auto w = generate_weights(3, 6);
  const std::set<WeightVector> got(w.begin(), w.end());
  const std::set<WeightVector> want{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0.5, 0.5, 0}, {0.5, 0, 0.5}, {0, 0.5, 0.5}};
  CHECK(got == want);
  CHECK(generate_weights(2, 3) == std::vector<WeightVector>{{1, 0}, {0.5, 0.5}, {0, 1}});
  for (std::size_t count : {1u, 7u, 20u, 50u}) {
    const auto ws = generate_weights(3, count);
    CHECK(ws.size() == count);
    CHECK(std::set<WeightVector>(ws.begin(), ws.end()).size() == count);
    for (const auto& v : ws) {
      double sum = 0;
      for (double x : v) {
        CHECK(x >= 0.0);
        sum += x;
      }
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
  CHECK(generate_weights(3, 20) == generate_weights(3, 20));
}

TEST_CASE("normalized Tchebycheff") {
  const NormBounds b{{1, 1}, {3, 5}};
  CHECK(tchebycheff_norm(std::vector<double>{2, 4}, std::vector<double>{0.5, 0.5}, b) == doctest::Approx(0.375));
  CHECK(tchebycheff_norm(std::vector<double>{1, 1}, std::vector<double>{0.5, 0.5}, b) == 0.0);
  const std::vector<double> w{1, 0};
  CHECK(tchebycheff_norm(std::vector<double>{2, 1}, w, b) == tchebycheff_norm(std::vector<double>{2, 1e9}, w, b));
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(tchebycheff_norm(std::vector<double>{2, inf}, w, b) == doctest::Approx(0.5));
  const NormBounds flat{{1, 1}, {1, 5}};
  CHECK(tchebycheff_norm(std::vector<double>{3, 1}, std::vector<double>{1, 0}, flat) == doctest::Approx(2.0));
}

TEST_CASE("dominance rules") {
  CHECK(pareto_compare(std::vector<double>{1, 2, 3}, std::vector<double>{2, 3, 4}) == Dominance::first);
  CHECK(pareto_compare(std::vector<double>{1, 3}, std::vector<double>{3, 1}) == Dominance::incomparable);
  CHECK(pareto_compare(std::vector<double>{1, 3}, std::vector<double>{1, 3}) == Dominance::equal);
  CHECK(pareto_compare(std::vector<double>{2, 3}, std::vector<double>{1, 3}) == Dominance::second);

  const auto good = feasible_with({9, 9});
  const auto bad = infeasible_with(0, 1);
  CHECK(constraint_dominates(good, bad) == Dominance::first);
  CHECK(constraint_dominates(bad, good) == Dominance::second);
  CHECK(constraint_dominates(infeasible_with(0, 5), infeasible_with(1, 0)) == Dominance::first);
  CHECK(constraint_dominates(infeasible_with(1, 2), infeasible_with(1, 3)) == Dominance::first);
  CHECK(constraint_dominates(infeasible_with(1, 2), infeasible_with(1, 2)) == Dominance::equal);
}

TEST_CASE("archive keeps a mutually non-dominated set under random insertions") {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 20; ++round) {
    Archive a;
    for (int i = 0; i < 200; ++i) {
      if (rng() % 5 == 0) {
        a.insert(infeasible_with(static_cast<std::uint32_t>(rng() % 3), static_cast<std::uint32_t>(rng() % 3)));
      } else {
        a.insert(feasible_with({static_cast<double>(rng() % 20), static_cast<double>(rng() % 20),
                                static_cast<double>(rng() % 20)}));
      }
      const auto& m = a.solutions();
      for (std::size_t x = 0; x < m.size(); ++x)
        for (std::size_t y = 0; y < m.size(); ++y)
          if (x != y) REQUIRE(constraint_dominates(m[x], m[y]) == Dominance::incomparable);
    }
  }
  Archive a;
  CHECK(a.insert(feasible_with({1, 2})));
  CHECK_FALSE(a.insert(feasible_with({1, 2})));
  CHECK_FALSE(a.insert(infeasible_with(0, 0)));
  CHECK(a.insert(feasible_with({0, 1})));
  CHECK(a.size() == 1);
}

TEST_CASE("archive bounds and argmin") {
  Archive a;
  a.insert(feasible_with({1, 4}));
  a.insert(feasible_with({2, 2}));
  a.insert(feasible_with({4, 1}));
  const auto b = a.bounds(2);
  CHECK(b.ideal == std::vector<double>{1, 1});
  CHECK(b.nadir == std::vector<double>{4, 4});
  for (const auto& w : generate_weights(2, 11)) {
    const auto best = a.argmin(w, b);
    const double v = tchebycheff_norm(a.solutions()[best].objectives->values, w, b);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double o = tchebycheff_norm(a.solutions()[i].objectives->values, w, b);
      CHECK(v <= o);
      if (i < best) CHECK(v < o);
    }
  }
  Archive empty;
  CHECK(empty.bounds(3).ideal == std::vector<double>{0, 0, 0});
}

TEST_CASE("instance targets and draws") {
  CHECK(instance_target(10, 40, 2, 4) == doctest::Approx(2.5));
  CHECK(instance_target(10, 40, 4, 4) == doctest::Approx(4.0));
  std::mt19937_64 rng(1);
  double sum = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const auto c = draw_instance_count(2.5, rng);
    CHECK((c == 2 || c == 3));
    sum += c;
  }
  CHECK(std::abs(sum / draws - 2.5) < 0.02);
  CHECK(draw_instance_count(3.0, rng) == 3);
}

TEST_CASE("initial population grows with the individual index") {
  const auto p = fat_tree_problem(2);
  std::mt19937_64 rng(4);
  const auto pop = initialize_population(p, 10, ObjectiveModel::mm1k, rng);
  REQUIRE(pop.size() == 10);
  CHECK(pop.front().genotype.total() <= pop.back().genotype.total());
  for (const auto& s : pop) {
    CHECK(s.feasible() == s.feasibility.feasible);
    if (s.feasible()) CHECK(s.objectives->arity() == 3);
  }
  std::mt19937_64 again(4);
  const auto pop2 = initialize_population(p, 10, ObjectiveModel::mm1k, again);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    CHECK(pop[i].genotype == pop2[i].genotype);
    CHECK(pop[i].objectives == pop2[i].objectives);
  }
}

TEST_CASE("neighbour operators") {
  std::mt19937_64 rng(3);
  Genotype one(8);
  one.add(3, 1);
  CHECK(neighbor(one, 2, NeighborOp::remove, rng).empty());
  Genotype empty(8);
  CHECK(neighbor(empty, 2, NeighborOp::remove, rng).total() == 1);
  CHECK(neighbor(empty, 2, NeighborOp::move, rng).total() == 1);

  Genotype g(8);
  for (int i = 0; i < 6; ++i) g.add(static_cast<ServerId>(rng() % 8), static_cast<std::uint32_t>(rng() % 3));
  for (int i = 0; i < 200; ++i) {
    const auto moved = neighbor(g, 3, NeighborOp::move, rng);
    CHECK(moved.total() == g.total());
    CHECK(moved.counts(3) == g.counts(3));
    CHECK(moved != g);
    const auto any = neighbor(g, 3, rng);
    const auto a = any.total();
    CHECK((a + 1 == g.total() || a == g.total() || a == g.total() + 1));
  }
}

TEST_CASE("search configuration validation") {
  SearchConfig c;
  CHECK_NOTHROW(c.validate());
  c.max_evaluations = c.init_population - 1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SearchConfig{};
  c.processes = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("zero search budget returns the non-dominated initial population") {
  const auto p = fat_tree_problem(3);
  SearchConfig c;
  c.model = ObjectiveModel::mm1k;
  c.init_population = 30;
  c.max_evaluations = 30;
  const auto r = optimize(p, c);
  CHECK(r.evaluations == 30);
  CHECK(r.evaluations_per_weight == 0);
  REQUIRE(r.final_archive.size() == r.initial_archive.size());
  for (std::size_t i = 0; i < r.final_archive.size(); ++i)
    CHECK(r.final_archive.solutions()[i].genotype == r.initial_archive.solutions()[i].genotype);
}

TEST_CASE("optimize is thread-count independent, within budget and never loses hypervolume") {
  const auto p = fat_tree_problem(5);
  SearchConfig c;
  c.model = ObjectiveModel::mm1k;
  c.init_population = 20;
  c.max_evaluations = 300;
  c.n_weights = 6;
  c.subproblems_per_epoch = 4;
  c.seed = 11;
  c.processes = 1;
  const auto a = optimize(p, c);
  c.processes = 4;
  const auto b = optimize(p, c);
  CHECK(a.evaluations <= c.max_evaluations);
  CHECK(a.evaluations == 20 + 6 * a.evaluations_per_weight);
  CHECK(a.epochs == 2);
  REQUIRE(a.final_archive.size() == b.final_archive.size());
  for (std::size_t i = 0; i < a.final_archive.size(); ++i) {
    CHECK(a.final_archive.solutions()[i].genotype == b.final_archive.solutions()[i].genotype);
    CHECK(a.final_archive.solutions()[i].objectives == b.final_archive.solutions()[i].objectives);
  }

  const auto init = split_finite(feasible_points(a.initial_archive)).finite;
  const auto fin = split_finite(feasible_points(a.final_archive)).finite;
  REQUIRE_FALSE(fin.empty());
  std::vector<Point> all = init;
  all.insert(all.end(), fin.begin(), fin.end());
  const auto bounds = bounds_of(all);
  CHECK(normalized_hypervolume(fin, bounds) >= normalized_hypervolume(init, bounds) - 1e-12);
}
