#include "vnfp/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include "vnfp/hash.hpp"

namespace vnfp {

namespace {

constexpr std::uint64_t kInitStream = std::numeric_limits<std::uint64_t>::max();

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

// Compositions of `h` into `m` parts, first part descending.
void lattice(std::size_t m, std::size_t h, std::vector<std::size_t>& cur, std::size_t count,
             std::vector<WeightVector>& out, std::size_t total_h) {
  if (out.size() >= count) return;
  if (cur.size() + 1 == m) {
    cur.push_back(h);
    WeightVector w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = static_cast<double>(cur[i]) / static_cast<double>(total_h);
    out.push_back(std::move(w));
    cur.pop_back();
    return;
  }
  for (std::size_t v = h + 1; v-- > 0;) {
    cur.push_back(v);
    lattice(m, h - v, cur, count, out, total_h);
    cur.pop_back();
    if (out.size() >= count) return;
  }
}

}  // namespace

std::vector<WeightVector> generate_weights(std::size_t m, std::size_t count) {
  if (m == 0) throw std::invalid_argument("weights need at least one objective");
  if (count == 0) return {};
  if (m == 1) {
    if (count > 1) throw std::invalid_argument("a single objective has exactly one weight vector");
    return {WeightVector{1.0}};
  }
  std::size_t h = 1;
  while (binomial(h + m - 1, m - 1) < count) ++h;
  std::vector<WeightVector> out;
  out.reserve(count);
  std::vector<std::size_t> cur;
  lattice(m, h, cur, count, out, h);
  return out;
}

double tchebycheff_norm(std::span<const double> f, std::span<const double> w, const NormBounds& bounds) {
  if (f.size() != w.size() || f.size() != bounds.ideal.size() || f.size() != bounds.nadir.size()) {
    throw std::invalid_argument("tchebycheff_norm: arity mismatch");
  }
  double best = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (w[i] == 0.0) continue;
    double range = bounds.nadir[i] - bounds.ideal[i];
    if (!(range > 0.0)) range = 1.0;
    best = std::max(best, w[i] * std::abs(f[i] - bounds.ideal[i]) / range);
  }
  return best;
}

Solution evaluate_genotype(const ProblemInstance& problem, Genotype genotype, ObjectiveModel model,
                           std::uint64_t eval_seed) {
  std::mt19937_64 rng(eval_seed);
  auto mapping = map_genotype(problem, genotype, rng);
  Solution s;
  s.objectives = evaluate(mapping, problem, model);
  s.feasibility = std::move(mapping.report);
  s.genotype = std::move(genotype);
  s.eval_seed = eval_seed;
  return s;
}

Dominance pareto_compare(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("pareto_compare: arity mismatch");
  bool a_better = false;
  bool b_better = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) a_better = true;
    else if (b[i] < a[i]) b_better = true;
  }
  if (a_better && b_better) return Dominance::incomparable;
  if (a_better) return Dominance::first;
  if (b_better) return Dominance::second;
  return Dominance::equal;
}

Dominance constraint_dominates(const Solution& a, const Solution& b) {
  if (a.feasible() != b.feasible()) return a.feasible() ? Dominance::first : Dominance::second;
  if (a.feasible()) return pareto_compare(a.objectives->values, b.objectives->values);
  const auto ka = std::pair(a.feasibility.services_without_instances, a.feasibility.unplaced_instances);
  const auto kb = std::pair(b.feasibility.services_without_instances, b.feasibility.unplaced_instances);
  if (ka < kb) return Dominance::first;
  if (kb < ka) return Dominance::second;
  return Dominance::equal;
}

bool Archive::insert(Solution solution) {
  for (const auto& m : members_) {
    const auto d = constraint_dominates(solution, m);
    if (d == Dominance::second || d == Dominance::equal) return false;
  }
  std::erase_if(members_, [&](const Solution& m) { return constraint_dominates(solution, m) == Dominance::first; });
  members_.push_back(std::move(solution));
  return true;
}

void Archive::merge(const Archive& other) {
  for (const auto& s : other.members_) insert(s);
}

NormBounds Archive::bounds(std::size_t arity) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  NormBounds b{std::vector<double>(arity, inf), std::vector<double>(arity, -inf)};
  for (const auto& m : members_) {
    if (!m.feasible()) continue;
    const auto& v = m.objectives->values;
    for (std::size_t i = 0; i < arity && i < v.size(); ++i) {
      if (!std::isfinite(v[i])) continue;
      b.ideal[i] = std::min(b.ideal[i], v[i]);
      b.nadir[i] = std::max(b.nadir[i], v[i]);
    }
  }
  for (std::size_t i = 0; i < arity; ++i) {
    if (b.ideal[i] > b.nadir[i]) b.ideal[i] = b.nadir[i] = 0.0;
  }
  return b;
}

bool scalar_better(const Solution& a, const Solution& b, std::span<const double> w, const NormBounds& bounds) {
  if (a.feasible() != b.feasible()) return a.feasible();
  if (!a.feasible()) return constraint_dominates(a, b) == Dominance::first;
  return tchebycheff_norm(a.objectives->values, w, bounds) < tchebycheff_norm(b.objectives->values, w, bounds);
}

std::size_t Archive::argmin(std::span<const double> w, const NormBounds& bounds) const {
  if (members_.empty()) throw std::logic_error("argmin on an empty archive");
  std::size_t best = 0;
  for (std::size_t i = 1; i < members_.size(); ++i) {
    if (scalar_better(members_[i], members_[best], w, bounds)) best = i;
  }
  return best;
}

double instance_target(double min_demand, double total_capacity, std::size_t i, std::size_t n) {
  if (n == 0 || !(min_demand > 0)) throw std::invalid_argument("instance_target: bad arguments");
  return (total_capacity / min_demand - 1.0) * static_cast<double>(i) / static_cast<double>(n) + 1.0;
}

std::uint32_t draw_instance_count(double target, std::mt19937_64& rng) {
  const double whole = std::floor(target);
  const double frac = target - whole;
  auto count = static_cast<std::uint32_t>(whole);
  if (frac > 0.0 && std::bernoulli_distribution(frac)(rng)) ++count;
  return count;
}

std::vector<Solution> initialize_population(const ProblemInstance& problem, std::size_t n, ObjectiveModel model,
                                            std::mt19937_64& rng) {
  if (n == 0) throw std::invalid_argument("initial population must be non-empty");
  const std::size_t n_servers = problem.n_servers();
  std::uniform_int_distribution<std::size_t> pick_server(0, n_servers - 1);
  std::vector<Solution> population;
  population.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double target = instance_target(problem.min_demand(), problem.total_capacity(), i, n);
    Genotype g(n_servers);
    for (std::uint32_t s = 0; s < problem.services.size(); ++s) {
      const auto count = draw_instance_count(target, rng);
      for (std::uint32_t c = 0; c < count; ++c) g.add(static_cast<ServerId>(pick_server(rng)), s);
    }
    const std::uint64_t eval_seed = rng();
    population.push_back(evaluate_genotype(problem, std::move(g), model, eval_seed));
  }
  return population;
}

Genotype neighbor(const Genotype& genotype, std::size_t n_services, NeighborOp op, std::mt19937_64& rng) {
  if (genotype.n_servers() == 0 || n_services == 0) throw std::invalid_argument("neighbor: empty problem");
  Genotype out = genotype;
  if (out.empty()) op = NeighborOp::add;
  const std::size_t n_servers = out.n_servers();
  switch (op) {
    case NeighborOp::add: {
      const auto service = std::uniform_int_distribution<std::size_t>(0, n_services - 1)(rng);
      const auto server = std::uniform_int_distribution<std::size_t>(0, n_servers - 1)(rng);
      out.add(static_cast<ServerId>(server), static_cast<std::uint32_t>(service));
      break;
    }
    case NeighborOp::remove: {
      out.remove_nth(std::uniform_int_distribution<std::size_t>(0, out.total() - 1)(rng));
      break;
    }
    case NeighborOp::move: {
      const auto [from, service] = out.remove_nth(std::uniform_int_distribution<std::size_t>(0, out.total() - 1)(rng));
      std::size_t to = from;
      if (n_servers > 1) {
        to = std::uniform_int_distribution<std::size_t>(0, n_servers - 2)(rng);
        if (to >= from) ++to;
      }
      out.add(static_cast<ServerId>(to), service);
      break;
    }
  }
  return out;
}

Genotype neighbor(const Genotype& genotype, std::size_t n_services, std::mt19937_64& rng) {
  const auto op = static_cast<NeighborOp>(std::uniform_int_distribution<int>(0, 2)(rng));
  return neighbor(genotype, n_services, op, rng);
}

void SearchConfig::validate() const {
  if (n_weights == 0) throw std::invalid_argument("weights must be >= 1");
  if (subproblems_per_epoch == 0) throw std::invalid_argument("subproblems per epoch must be >= 1");
  if (processes == 0) throw std::invalid_argument("processes must be >= 1");
  if (init_population == 0) throw std::invalid_argument("initial population must be >= 1");
  if (max_evaluations < init_population) {
    throw std::invalid_argument("max evaluations must cover the initial population");
  }
}

namespace {

Archive run_weight(const ProblemInstance& problem, const SearchConfig& config, const Archive& snapshot,
                   const NormBounds& bounds, const WeightVector& w, std::size_t weight_index,
                   std::size_t iterations) {
  std::mt19937_64 rng(derive_seed(config.seed, weight_index));
  Solution incumbent = snapshot.solutions()[snapshot.argmin(w, bounds)];
  Archive local;
  for (std::size_t t = 0; t < iterations; ++t) {
    Genotype g = neighbor(incumbent.genotype, problem.services.size(), rng);
    const std::uint64_t eval_seed = rng();
    Solution candidate = evaluate_genotype(problem, std::move(g), config.model, eval_seed);
    const bool better = scalar_better(candidate, incumbent, w, bounds);
    local.insert(candidate);
    if (better) incumbent = std::move(candidate);
  }
  return local;
}

}  // namespace

SearchResult optimize(const ProblemInstance& problem, const SearchConfig& config) {
  config.validate();
  problem.validate();
  const std::size_t m = model_arity(config.model);
  const auto weights = generate_weights(m, config.n_weights);

  SearchResult result;
  std::mt19937_64 init_rng(derive_seed(config.seed, kInitStream));
  result.initial_population = initialize_population(problem, config.init_population, config.model, init_rng);
  for (const auto& s : result.initial_population) result.initial_archive.insert(s);
  result.evaluations = result.initial_population.size();

  result.evaluations_per_weight = (config.max_evaluations - result.evaluations) / weights.size();
  result.epochs = (weights.size() + config.subproblems_per_epoch - 1) / config.subproblems_per_epoch;

  Archive archive = result.initial_archive;
  if (result.evaluations_per_weight > 0) {
    for (std::size_t e = 0; e < result.epochs; ++e) {
      const std::size_t first = e * config.subproblems_per_epoch;
      const std::size_t last = std::min(weights.size(), first + config.subproblems_per_epoch);
      const NormBounds bounds = archive.bounds(m);
      std::vector<Archive> local(last - first);

      std::vector<std::exception_ptr> errors(last - first);

      std::atomic<std::size_t> next{first};
      auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < last;) {
          try {
            local[i - first] =
                run_weight(problem, config, archive, bounds, weights[i], i, result.evaluations_per_weight);
          } catch (...) {
            errors[i - first] = std::current_exception();
          }
        }
      };
      const std::size_t n_threads = std::min(config.processes, last - first);
      if (n_threads <= 1) {
        worker();
      } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
      }
      for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
      }
      for (const auto& a : local) archive.merge(a);
      result.evaluations += (last - first) * result.evaluations_per_weight;
    }
  }
  result.final_archive = std::move(archive);
  return result;
}

}  // namespace vnfp
