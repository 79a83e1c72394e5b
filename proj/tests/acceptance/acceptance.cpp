// Acceptance suite: runs every criterion, prints one PASS/FAIL line each and
// exits non-zero if any fails. `acceptance 3 7` runs only criteria 3 and 7.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "vnfp/metrics.hpp"
#include "vnfp/objective_models.hpp"
#include "vnfp/queueing.hpp"
#include "vnfp/routing_tables.hpp"
#include "vnfp/search.hpp"
#include "vnfp/services.hpp"
#include "vnfp/topology.hpp"

using namespace vnfp;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

// Accumulates failures while keeping the first few messages.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ok_ = false;
    if (++failures_ <= 3) msgs_ << (failures_ > 1 ? "; " : "") << what;
  }
  Outcome done(const std::string& summary) const {
    std::string d = summary;
    if (!ok_) d += " | failures=" + std::to_string(failures_) + ": " + msgs_.str();
    return {ok_, d};
  }

 private:
  bool ok_ = true;
  int failures_ = 0;
  std::ostringstream msgs_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ProblemInstance make_problem(const Topology& t, const ProblemParams& params, std::uint64_t seed,
                             std::uint32_t cache = 64) {
  auto topo = std::make_shared<const Topology>(t);
  TableOptions opt;
  opt.cache_size = cache;
  opt.seed = seed;
  auto tables = std::make_shared<const TableSet>(build_table_set(*topo, opt));
  return random_problem(topo, tables, params, seed);
}

std::vector<Point> feasible_finite(const Archive& a) {
  std::vector<Point> pts;
  for (const auto& s : a.solutions())
    if (s.feasible()) pts.push_back(s.objectives->values);
  return nondominated(split_finite(pts).finite);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// 1 ------------------------------------------------------------------------
Outcome topology_laws() {
  Checker c;
  const std::vector<std::pair<TopologyKind, std::uint32_t>> table{
      {{TopologyFamily::fat_tree, 16}, 1024}, {{TopologyFamily::fat_tree, 20}, 2000},
      {{TopologyFamily::fat_tree, 24}, 3456}, {{TopologyFamily::leaf_spine, 32}, 512},
      {{TopologyFamily::leaf_spine, 44}, 968}, {{TopologyFamily::dcell1, 20}, 420},
      {{TopologyFamily::dcell1, 30}, 930},     {{TopologyFamily::dcell1, 42}, 1806}};
  std::ostringstream s;
  for (const auto& [kind, servers] : table) {
    const auto t = build_topology(kind);
    c.expect(t.n_servers() == servers, std::string(to_string(kind.family)) + " " + std::to_string(kind.size) +
                                           " gave " + std::to_string(t.n_servers()));
    c.expect(validate(t).ok(), "invalid " + std::string(to_string(kind.family)));
    s << to_string(kind.family) << kind.size << '=' << t.n_servers() << ' ';
  }
  return c.done(s.str());
}

// 2 ------------------------------------------------------------------------
Outcome queueing_oracle() {
  Checker c;
  double worst = 0.0;
  for (int r = 1; r <= 20; ++r) {
    const double rho = 0.1 * r;
    for (unsigned k = 1; k <= 50; ++k) {
      const auto got = mm1k_stats(rho, 1.0, k);
      const auto want = oracle::mm1k(static_cast<long double>(rho), 1.0L, k);
      for (auto [a, b] : {std::pair{got.wait, want.wait}, std::pair{got.loss, want.loss},
                          std::pair{got.mean_length, want.mean_length}, std::pair{got.util, want.util}}) {
        const double err = std::abs(a - static_cast<double>(b));
        worst = std::max(worst, err);
        c.expect(err <= 1e-9, "rho=" + fmt("%.1f", rho) + " K=" + std::to_string(k));
      }
    }
  }
  const auto p = mm1k_stats(1.0, 2.0, 4);
  c.expect(std::abs(p.loss - 1.0 / 31) < 1e-15, "P(1,2,4)=" + fmt("%.17g", p.loss));
  c.expect(std::abs(p.wait - 13.0 / 15) < 1e-15, "W(1,2,4)=" + fmt("%.17g", p.wait));
  return c.done("1000 grid points, max abs err " + fmt("%.2e", worst) + ", P=1/31 W=13/15");
}

// 3 ------------------------------------------------------------------------
Outcome routing_equivalence() {
  Checker c;
  std::size_t pairs = 0;
  const std::vector<TopologyKind> kinds{{TopologyFamily::fat_tree, 6}, {TopologyFamily::leaf_spine, 16},
                                        {TopologyFamily::dcell1, 12}};
  for (const auto& kind : kinds) {
    const auto t = build_topology(kind);
    c.expect(t.size() <= 200, "topology too large");
    const auto agg = build_forwarding_tables(t, Aggregation::on);
    const auto raw = build_forwarding_tables(t, Aggregation::off);
    std::vector<std::vector<std::uint32_t>> dist(t.n_servers());
    for (ServerId s = 0; s < t.n_servers(); ++s) dist[s] = bfs_distances(t, s);
    for (ComponentId from = 0; from < t.size(); ++from) {
      for (ServerId dest = 0; dest < t.n_servers(); ++dest) {
        ++pairs;
        const auto hops = agg[from].lookup(dest);
        c.expect(hops == raw[from].lookup(dest), "aggregation changed a lookup");
        // Follow every next-hop choice one step and the first choice to the end.
        for (auto h : hops) c.expect(dist[dest][h] + 1 == dist[dest][from], "hop does not approach");
        ComponentId at = from;
        std::uint32_t walked = 0;
        while (at != dest && walked <= t.size()) {
          const auto next = agg[at].lookup(dest);
          if (next.empty()) break;
          at = next.front();
          ++walked;
        }
        c.expect(at == dest && walked == dist[dest][from], "walk length differs from BFS distance");
      }
    }
  }
  return c.done(std::to_string(pairs) + " (component, destination) pairs on FT6/LS16/DCell12");
}

// 4 ------------------------------------------------------------------------
Outcome compression() {
  Checker c;
  std::ostringstream s;
  const std::vector<std::pair<TopologyKind, double>> cases{{{TopologyFamily::fat_tree, 16}, 99.0},
                                                           {{TopologyFamily::leaf_spine, 44}, 99.0},
                                                           {{TopologyFamily::dcell1, 30}, 25.0}};
  for (const auto& [kind, floor] : cases) {
    const auto mem = forwarding_memory(build_forwarding_tables(build_topology(kind)));
    const double saved = mem.percent_saved();
    c.expect(saved >= floor, std::string(to_string(kind.family)) + " saved " + fmt("%.2f", saved));
    s << to_string(kind.family) << kind.size << '=' << fmt("%.2f%%", saved) << ' ';
  }
  return c.done(s.str());
}

// 5 ------------------------------------------------------------------------
// Frequency of each server in a size-n cache of `owner` over `runs` seeds,
// checked against the exact expectation for the tier the cut falls into.
void uniformity_on(const Topology& t, ServerId owner, std::size_t n, int runs, Checker& c, double& worst_z) {
  const auto d = bfs_distances(t, owner);
  std::vector<ServerId> others;
  for (ServerId s = 0; s < t.n_servers(); ++s)
    if (s != owner) others.push_back(s);
  std::stable_sort(others.begin(), others.end(), [&](ServerId a, ServerId b) { return d[a] < d[b]; });
  const auto cut = d[others[n - 1]];
  std::size_t closer = 0, tier = 0;
  for (auto s : others) {
    if (d[s] < cut) ++closer;
    if (d[s] == cut) ++tier;
  }
  std::vector<int> hits(t.n_servers(), 0);
  for (int r = 0; r < runs; ++r) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(r) * 7919 + 1);
    for (auto s : build_distance_cache(t, owner, n, rng).nearest) ++hits[s];
  }
  const double p = static_cast<double>(n - closer) / static_cast<double>(tier);
  const double sigma = std::sqrt(runs * p * (1 - p));
  for (auto s : others) {
    if (d[s] < cut) {
      c.expect(hits[s] == runs, "closer server missing from cache");
    } else if (d[s] > cut) {
      c.expect(hits[s] == 0, "farther server in cache");
    } else {
      const double z = std::abs(hits[s] - runs * p) / sigma;
      worst_z = std::max(worst_z, z);
      c.expect(z <= 3.0, "server " + std::to_string(s) + " z=" + fmt("%.2f", z));
    }
  }
}

Outcome bfs_uniformity() {
  Checker c;
  double worst_z = 0.0;
  const int runs = 10000;

  std::vector<Component> comps;
  std::vector<std::vector<ComponentId>> adj(9);
  for (ComponentId i = 0; i < 8; ++i) {
    comps.push_back({i, ComponentClass::server, 1});
    adj[i] = {8};
    adj[8].push_back(i);
  }
  comps.push_back({8, ComponentClass::switch_, 8});
  const Topology star(comps, adj, 8, {TopologyFamily::custom, 0});
  uniformity_on(star, 0, 3, runs, c, worst_z);

  const auto dcell = build_dcell1(4);
  uniformity_on(dcell, 0, 2, runs, c, worst_z);   // inside the same-cell tier
  uniformity_on(dcell, 5, 6, runs, c, worst_z);   // cuts a cross-cell tier
  return c.done("star(8) and DCell(4), 10^4 runs each, max |z| = " + fmt("%.2f", worst_z));
}

// 6 ------------------------------------------------------------------------
Outcome mapping_feasibility() {
  Checker c;
  const auto t = build_fat_tree(8);
  std::mt19937_64 rng(2024);
  std::size_t placed = 0, dropped = 0;
  ProblemParams params;
  params.n_services = 6;
  std::vector<ProblemInstance> problems;
  for (std::uint64_t s = 0; s < 10; ++s) problems.push_back(make_problem(t, params, 100 + s, 16));
  for (int g = 0; g < 1000; ++g) {
    const auto& p = problems[static_cast<std::size_t>(g) % problems.size()];
    Genotype genotype(p.n_servers());
    const auto n = rng() % 120;
    for (std::uint64_t i = 0; i < n; ++i)
      genotype.add(static_cast<ServerId>(rng() % p.n_servers()), static_cast<std::uint32_t>(rng() % p.services.size()));
    const auto m = map_genotype(p, genotype, rng);
    const auto report = check_constraints(p, m.placement);
    for (const auto& v : report.violations) {
      c.expect(v.kind == Violation::Kind::missing_service,
               std::string(to_string(v.kind)) + " violation: " + v.detail);
    }
    for (const auto& insts : m.placement.services) placed += insts.size();
    dropped += m.report.unplaced_instances;
  }
  return c.done("1000 genotypes on FT8, " + std::to_string(placed) + " instances placed, " +
                std::to_string(dropped) + " rolled back, no link/capacity/order violations");
}

// 7 ------------------------------------------------------------------------
Outcome initializer_expectation() {
  Checker c;
  std::mt19937_64 rng(77);
  const int draws = 10000;
  const double target = instance_target(10, 40, 2, 4);
  double sum = 0;
  for (int i = 0; i < draws; ++i) sum += draw_instance_count(target, rng);
  const double mean = sum / draws;
  c.expect(std::abs(mean - 2.5) <= 0.02, "mean " + fmt("%.4f", mean));

  // Full initializer at i = n on a problem whose capacity ratio is fractional.
  ProblemParams params;
  params.n_services = 3;
  const auto p = make_problem(build_fat_tree(4), params, 9);
  const double m_min = p.min_demand();
  const double m_max = p.total_capacity();
  double demand = 0;
  const int runs = 2000;
  for (int r = 0; r < runs; ++r) {
    std::mt19937_64 run_rng(static_cast<std::uint64_t>(r));
    const auto pop = initialize_population(p, 1, ObjectiveModel::plus, run_rng);
    const auto counts = pop.back().genotype.counts(p.services.size());
    for (std::size_t s = 0; s < counts.size(); ++s) {
      double chain = 0;
      for (auto v : p.services[s].chain) chain += p.vnfs[v].size;
      demand += counts[s] * chain;
    }
  }
  demand /= runs;
  c.expect(std::abs(demand - m_max) <= 0.02 * m_max, "demand " + fmt("%.2f", demand));
  return c.done("mean instances " + fmt("%.4f", mean) + " (target 2.5); demand at i=n " + fmt("%.2f", demand) +
                " vs M^max " + fmt("%.0f", m_max) + " (M^min " + fmt("%.0f", m_min) + ")");
}

// 8 ------------------------------------------------------------------------
Outcome search_integrity() {
  Checker c;
  ProblemParams params;
  params.n_services = 3;
  const auto p = make_problem(build_fat_tree(4), params, 31);
  SearchConfig cfg;
  cfg.max_evaluations = 2000;
  cfg.seed = 5;
  std::vector<SearchResult> runs;
  for (std::size_t threads : {1u, 4u, 8u}) {
    cfg.processes = threads;
    runs.push_back(optimize(p, cfg));
  }
  const auto& r = runs.front();
  c.expect(r.evaluations <= cfg.max_evaluations, "evaluations " + std::to_string(r.evaluations));
  for (std::size_t i = 1; i < runs.size(); ++i) {
    const auto& a = r.final_archive.solutions();
    const auto& b = runs[i].final_archive.solutions();
    bool same = a.size() == b.size() && runs[i].evaluations == r.evaluations;
    for (std::size_t k = 0; same && k < a.size(); ++k)
      same = a[k].genotype == b[k].genotype && a[k].objectives == b[k].objectives && a[k].eval_seed == b[k].eval_seed;
    c.expect(same, "archive differs with " + std::to_string(i == 1 ? 4 : 8) + " threads");
  }
  const auto init = feasible_finite(r.initial_archive);
  const auto fin = feasible_finite(r.final_archive);
  c.expect(!fin.empty(), "no feasible final solutions");
  double hv_init = 0, hv_final = 0;
  if (!fin.empty()) {
    std::vector<Point> all = init;
    all.insert(all.end(), fin.begin(), fin.end());
    const auto bounds = bounds_of(all);
    hv_init = init.empty() ? 0.0 : normalized_hypervolume(init, bounds);
    hv_final = normalized_hypervolume(fin, bounds);
    c.expect(hv_final >= hv_init, "HV dropped");
  }
  return c.done(std::to_string(r.evaluations) + " evaluations, HV initial " + fmt("%.4f", hv_init) + " -> final " +
                fmt("%.4f", hv_final) + ", identical for 1/4/8 threads");
}

// 9 ------------------------------------------------------------------------
Outcome model_tradeoff() {
  Checker c;
  const auto topo = build_fat_tree(8);
  ProblemParams params;
  params.n_services = 6;
  const int seeds = 10;

  std::vector<double> t_util, t_mm1k, t_acc;
  std::map<ObjectiveModel, std::vector<double>> hv;
  const std::vector<ObjectiveModel> heuristics{ObjectiveModel::utilization, ObjectiveModel::cwtpl,
                                               ObjectiveModel::ru, ObjectiveModel::plus};
  for (int seed = 0; seed < seeds; ++seed) {
    const auto p = make_problem(topo, params, 900 + static_cast<std::uint64_t>(seed));

    // Evaluation cost on a shared set of mapped initial solutions.
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    const auto pop = initialize_population(p, 40, ObjectiveModel::plus, rng);
    for (const auto& s : pop) {
      std::mt19937_64 map_rng(s.eval_seed);
      const auto m = map_genotype(p, s.genotype, map_rng);
      for (auto [model, sink] : {std::pair{ObjectiveModel::utilization, &t_util},
                                 std::pair{ObjectiveModel::mm1k, &t_mm1k},
                                 std::pair{ObjectiveModel::accurate, &t_acc}}) {
        const int reps = 20;
        volatile double keep = 0;
        const auto t0 = Clock::now();
        for (int k = 0; k < reps; ++k) keep = keep + evaluate_placement(m.placement, p, model).values[0];
        sink->push_back(std::chrono::duration<double>(Clock::now() - t0).count() / reps);
      }
    }

    // Search with each heuristic, then score every archive with the accurate model.
    std::map<ObjectiveModel, std::vector<Point>> fronts;
    std::vector<Point> all;
    for (auto model : heuristics) {
      SearchConfig cfg;
      cfg.model = model;
      cfg.max_evaluations = 1000;
      cfg.seed = 40 + static_cast<std::uint64_t>(seed);
      const auto r = optimize(p, cfg);
      std::vector<Point> pts;
      for (const auto& s : r.final_archive.solutions()) {
        if (!s.feasible()) continue;
        const auto re = evaluate_genotype(p, s.genotype, ObjectiveModel::accurate, s.eval_seed);
        if (re.feasible()) pts.push_back(re.objectives->values);
      }
      fronts[model] = nondominated(split_finite(pts).finite);
      all.insert(all.end(), fronts[model].begin(), fronts[model].end());
    }
    const auto bounds = all.empty() ? NormBounds{{0, 0, 0}, {0, 0, 0}} : bounds_of(all);
    for (auto model : heuristics)
      hv[model].push_back(fronts[model].empty() ? 0.0 : normalized_hypervolume(fronts[model], bounds));
  }

  const double mu = median(t_util), mk = median(t_mm1k), ma = median(t_acc);
  c.expect(mu < mk, "utilization not faster than mm1k");
  c.expect(mk < ma, "mm1k not faster than accurate");
  std::ostringstream s;
  s << "median eval us: utilization " << fmt("%.2f", mu * 1e6) << " < mm1k " << fmt("%.2f", mk * 1e6)
    << " < accurate " << fmt("%.2f", ma * 1e6) << "; median accurate-HV over " << seeds << " seeds:";
  const double hv_util = median(hv[ObjectiveModel::utilization]);
  for (auto model : heuristics) {
    const double h = median(hv[model]);
    s << ' ' << to_string(model) << '=' << fmt("%.4f", h);
    if (model != ObjectiveModel::utilization)
      c.expect(hv_util >= h, "utilization HV below " + std::string(to_string(model)));
  }
  return c.done(s.str());
}

// 10 -----------------------------------------------------------------------
Outcome hypervolume_correctness() {
  Checker c;
  const std::vector<double> unit{1, 1};
  const double example = hypervolume(std::vector<Point>{{0.25, 0.75}, {0.75, 0.25}}, unit);
  c.expect(example == 0.3125, "worked example gave " + fmt("%.17g", example));

  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_z = 0.0;
  for (int set = 0; set < 20; ++set) {
    const std::size_t m = set % 2 ? 3 : 2;
    const std::size_t n = 5 + rng() % 26;
    std::vector<Point> pts(n, Point(m));
    for (auto& p : pts)
      for (auto& x : p) x = u(rng);
    const std::vector<double> ref(m, kReferenceCoordinate);
    const double exact = hypervolume(pts, ref);
    const auto [est, se] = oracle::mc_hypervolume(pts, ref, 1'000'000, 1000 + static_cast<std::uint64_t>(set));
    const double z = se > 0 ? std::abs(exact - est) / se : 0.0;
    worst_z = std::max(worst_z, z);
    c.expect(z <= 3.0, "set " + std::to_string(set) + " z=" + fmt("%.2f", z));
  }
  return c.done("worked example = 0.3125 exactly; 20 random 2-D/3-D sets vs 10^6-sample Monte Carlo, max |z| = " +
                fmt("%.2f", worst_z));
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "topology laws", 5, topology_laws},
      {2, "queueing oracle", 10, queueing_oracle},
      {3, "routing equivalence", 60, routing_equivalence},
      {4, "compression", 120, compression},
      {5, "stochastic BFS uniformity", 30, bfs_uniformity},
      {6, "mapping feasibility", 60, mapping_feasibility},
      {7, "initializer expectation", 30, initializer_expectation},
      {8, "search integrity", 300, search_integrity},
      {9, "model trade-off direction", 900, model_tradeoff},
      {10, "hypervolume correctness", 30, hypervolume_correctness},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& cr : all) {
    if (!wanted.empty() && !wanted.count(cr.id)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (secs > cr.budget_seconds) {
      o.pass = false;
      o.detail += " | over runtime budget of " + fmt("%.0f", cr.budget_seconds) + " s";
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s criterion %2d %-27s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", cr.id, cr.name.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
