#include <doctest.h>

#include <memory>
#include <stdexcept>

#include "vnfp/services.hpp"
#include "vnfp/services_io.hpp"

using namespace vnfp;

namespace {

ProblemInstance make_problem(Topology topo, std::vector<VnfKind> vnfs, std::vector<ServiceSpec> services,
                             double capacity, std::uint32_t cache = 64) {
  ProblemInstance p;
  p.topology = std::make_shared<const Topology>(std::move(topo));
  TableOptions opt;
  opt.cache_size = cache;
  opt.bfs = BfsMode::deterministic;
  p.tables = std::make_shared<const TableSet>(build_table_set(*p.topology, opt));
  p.vnfs = std::move(vnfs);
  p.services = std::move(services);
  p.server_capacity = capacity;
  p.model = default_model_config(10.0);
  p.validate();
  return p;
}

QueueRef vs(ComponentId c) { return {c, QueueClass::vswitch, 0}; }
QueueRef sw(ComponentId c) { return {c, QueueClass::switch_queue, 0}; }
QueueRef vnf(ComponentId host, std::uint32_t id) { return {host, QueueClass::vnf, id}; }

}  // namespace

TEST_CASE("genotype bookkeeping") {
  Genotype g(4);
  CHECK(g.empty());
  g.add(2, 1);
  g.add(0, 0);
  g.add(2, 0);
  CHECK(g.total() == 3);
  CHECK(g.nth(0) == std::pair<ServerId, std::uint32_t>{0, 0});
  CHECK(g.nth(1) == std::pair<ServerId, std::uint32_t>{2, 1});
  CHECK(g.counts(3) == std::vector<std::uint32_t>{2, 1, 0});
  CHECK(g.remove_nth(1) == std::pair<ServerId, std::uint32_t>{2, 1});
  CHECK(g.total() == 2);
  CHECK_THROWS_AS(g.nth(5), std::out_of_range);
  CHECK_THROWS(g.add(9, 0));
}

TEST_CASE("a chain that fits stays on the anchor server") {
  auto p = make_problem(build_leaf_spine(2), {{1, 10}, {1, 10}}, {{{0, 1}, 1.0}}, 2);
  Genotype g(2);
  g.add(0, 0);
  std::mt19937_64 rng(1);
  const auto m = map_genotype(p, g, rng);
  CHECK(m.report.feasible);
  REQUIRE(m.placement.services[0].size() == 1);
  const auto& inst = m.placement.services[0][0];
  CHECK(inst.route == std::vector<QueueRef>{vs(0), vnf(0, 0), vs(0), vnf(0, 1)});
  CHECK(inst.weight == 1.0);
  CHECK(m.placement.used_capacity == std::vector<double>{2, 0});
}

TEST_CASE("overflow moves the next VNF to the nearest server with room") {
  auto p = make_problem(build_leaf_spine(2), {{1, 10}, {1, 10}}, {{{0, 1}, 1.0}}, 1);
  Genotype g(2);
  g.add(0, 0);
  std::mt19937_64 rng(1);
  const auto m = map_genotype(p, g, rng);
  CHECK(m.report.feasible);
  const auto& inst = m.placement.services[0][0];
  // servers 0,1; leaves 2,3; spine 4
  CHECK(inst.route == std::vector<QueueRef>{vs(0), vnf(0, 0), vs(0), sw(2), sw(4), sw(3), vs(1), vnf(1, 1)});
  CHECK(inst.assignments[1].server == 1);
  CHECK(check_constraints(p, m.placement).feasible);
}

TEST_CASE("missing services and unplaceable instances make a solution infeasible") {
  auto p = make_problem(build_leaf_spine(2), {{1, 10}, {1, 10}}, {{{0}, 1.0}, {{1}, 1.0}}, 1);
  Genotype g(2);
  g.add(0, 0);
  std::mt19937_64 rng(1);
  auto m = map_genotype(p, g, rng);
  CHECK_FALSE(m.report.feasible);
  CHECK(m.report.services_without_instances == 1);
  CHECK(m.report.unplaced_instances == 0);

  Genotype full(2);
  for (int i = 0; i < 3; ++i) full.add(0, 0);
  full.add(1, 1);
  m = map_genotype(p, full, rng);
  CHECK(m.report.unplaced_instances == 2);
  CHECK(m.placement.used_capacity == std::vector<double>{1, 1});
}

TEST_CASE("a dropped instance gives its capacity back") {
  // Three unit VNFs, two servers of capacity 1: the third VNF finds no room.
  auto p = make_problem(build_leaf_spine(2), {{1, 10}, {1, 10}, {1, 10}}, {{{0, 1, 2}, 1.0}}, 1);
  Genotype g(2);
  g.add(0, 0);
  std::mt19937_64 rng(3);
  const auto m = map_genotype(p, g, rng);
  CHECK(m.report.unplaced_instances == 1);
  CHECK(m.placement.used_capacity == std::vector<double>{0, 0});
  CHECK(m.placement.vnf_queues.empty());
}

TEST_CASE("weights split traffic equally across instances") {
  auto p = make_problem(build_fat_tree(4), {{1, 10}}, {{{0}, 2.0}}, 2);
  Genotype g(16);
  g.add(0, 0);
  g.add(5, 0);
  g.add(9, 0);
  std::mt19937_64 rng(1);
  const auto m = map_genotype(p, g, rng);
  REQUIRE(m.placement.services[0].size() == 3);
  for (const auto& inst : m.placement.services[0]) CHECK(inst.weight == doctest::Approx(1.0 / 3));
}

TEST_CASE("mapping is deterministic for a fixed seed") {
  auto topo = std::make_shared<const Topology>(build_fat_tree(4));
  auto tables = std::make_shared<const TableSet>(build_table_set(*topo, {}));
  const auto p = random_problem(topo, tables, {}, 5);
  Genotype g(16);
  for (ServerId s = 0; s < 16; s += 3) g.add(s, s % 3);
  std::mt19937_64 a(9), b(9);
  CHECK(map_genotype(p, g, a).placement == map_genotype(p, g, b).placement);
}

TEST_CASE("check_constraints catches tampered placements") {
  auto p = make_problem(build_leaf_spine(2), {{1, 10}, {1, 10}}, {{{0, 1}, 1.0}}, 1);
  Genotype g(2);
  g.add(0, 0);
  std::mt19937_64 rng(1);
  const auto good = map_genotype(p, g, rng).placement;
  REQUIRE(check_constraints(p, good).feasible);

  SUBCASE("teleporting hop") {
    auto bad = good;
    auto& route = bad.services[0][0].route;
    route.erase(route.begin() + 4);  // drop the spine
    const auto r = check_constraints(p, bad);
    CHECK_FALSE(r.feasible);
    REQUIRE_FALSE(r.violations.empty());
    CHECK(r.violations[0].kind == Violation::Kind::link);
  }
  SUBCASE("overfilled server") {
    auto bad = good;
    bad.vnf_queues[1].server = 0;
    bad.services[0][0].assignments[1].server = 0;
    bad.services[0][0].route = {vs(0), vnf(0, 0), vs(0), vnf(0, 1)};
    bad.used_capacity = {2, 0};
    const auto r = check_constraints(p, bad);
    CHECK_FALSE(r.feasible);
    bool capacity = false;
    for (const auto& v : r.violations) capacity = capacity || v.kind == Violation::Kind::capacity;
    CHECK(capacity);
  }
  SUBCASE("chain order") {
    auto bad = good;
    std::swap(bad.vnf_queues[0].chain_pos, bad.vnf_queues[1].chain_pos);
    CHECK_FALSE(check_constraints(p, bad).feasible);
  }
  SUBCASE("weights") {
    auto bad = good;
    bad.services[0][0].weight = 0.5;
    CHECK_FALSE(check_constraints(p, bad).feasible);
  }
}

TEST_CASE("random_problem is seeded and honours its ranges") {
  auto topo = std::make_shared<const Topology>(build_fat_tree(4));
  auto tables = std::make_shared<const TableSet>(build_table_set(*topo, {}));
  ProblemParams params;
  params.n_services = 5;
  params.chain_length = {3, 3};
  const auto a = random_problem(topo, tables, params, 11);
  const auto b = random_problem(topo, tables, params, 11);
  CHECK(a.vnfs == b.vnfs);
  CHECK(a.services == b.services);
  CHECK(a.model == b.model);
  for (const auto& s : a.services) {
    CHECK(s.chain.size() == 3);
    CHECK(s.arrival_rate >= params.arrival_rate.lo);
    CHECK(s.arrival_rate <= params.arrival_rate.hi);
  }
  for (const auto& v : a.vnfs) {
    CHECK(v.size >= 1);
    CHECK(v.size <= 2);
  }

  params.n_services = 0;
  const auto empty = random_problem(topo, tables, params, 1);
  CHECK(empty.services.empty());
  CHECK_NOTHROW(empty.validate());

  params.chain_length = {4, 2};
  CHECK_THROWS_AS(random_problem(topo, tables, params, 1), std::invalid_argument);
}

TEST_CASE("problem and genotype JSON round-trip") {
  auto topo = std::make_shared<const Topology>(build_fat_tree(4));
  auto tables = std::make_shared<const TableSet>(build_table_set(*topo, {}));
  const auto p = random_problem(topo, tables, {}, 3);
  const auto back = problem_from_json(problem_to_json(p), topo, tables);
  CHECK(back.vnfs == p.vnfs);
  CHECK(back.services == p.services);
  CHECK(back.model == p.model);
  CHECK(back.server_capacity == p.server_capacity);

  Genotype g(16);
  g.add(3, 1);
  g.add(3, 0);
  g.add(15, 2);
  CHECK(genotype_from_json(genotype_to_json(g)) == g);

  auto other = std::make_shared<const Topology>(build_fat_tree(6));
  auto other_tables = std::make_shared<const TableSet>(build_table_set(*other, {}));
  CHECK_THROWS(problem_from_json(problem_to_json(p), other, other_tables));
}
