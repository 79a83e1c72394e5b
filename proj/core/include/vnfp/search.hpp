#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "vnfp/metrics.hpp"
#include "vnfp/objective_models.hpp"
#include "vnfp/services.hpp"

namespace vnfp {

/// Non-negative weights summing to one.
using WeightVector = std::vector<double>;

/// Simplex-lattice weights for `m` objectives. Uses the smallest lattice
/// parameter H whose lattice has at least `count` points, enumerates it in
/// lexicographically descending order and keeps the first `count`.
std::vector<WeightVector> generate_weights(std::size_t m, std::size_t count);

/// max_i w_i * |f_i - ideal_i| / (nadir_i - ideal_i). Objectives with zero
/// weight are skipped and a collapsed range uses denominator 1.
double tchebycheff_norm(std::span<const double> f, std::span<const double> w, const NormBounds& bounds);

struct Solution {
  Genotype genotype;
  std::optional<ObjectiveVector> objectives;  // present iff feasible
  FeasibilityReport feasibility;
  std::uint64_t eval_seed = 0;  // drives ECMP choices while mapping

  bool feasible() const noexcept { return objectives.has_value(); }
};

/// Maps and scores a genotype with its own RNG stream.
Solution evaluate_genotype(const ProblemInstance& problem, Genotype genotype, ObjectiveModel model,
                           std::uint64_t eval_seed);

enum class Dominance : std::uint8_t { first, second, equal, incomparable };

/// Pareto comparison of two minimization vectors of equal arity.
Dominance pareto_compare(std::span<const double> a, std::span<const double> b);

/// Feasible beats infeasible. Two infeasible solutions are ordered by
/// (services without instances, unplaced instances), fewer first. Two feasible
/// ones fall back to Pareto dominance.
Dominance constraint_dominates(const Solution& a, const Solution& b);

/// Mutually non-dominated set under constraint_dominates. A newcomer that is
/// dominated by or equal to a member is rejected; members it dominates are
/// removed. Insertion order is preserved.
class Archive {
 public:
  Archive() = default;

  bool insert(Solution solution);
  void merge(const Archive& other);

  const std::vector<Solution>& solutions() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }

  /// Ideal and nadir over finite objective values of feasible members. An
  /// objective with no finite value gets the range [0, 0].
  NormBounds bounds(std::size_t arity) const;

  /// Index of the member minimizing the scalarization (feasible before
  /// infeasible, ties to the lowest index). Requires a non-empty archive.
  std::size_t argmin(std::span<const double> w, const NormBounds& bounds) const;

 private:
  std::vector<Solution> members_;
};

/// Acceptance test of the local search: is `a` strictly better than `b` for
/// the subproblem with weights `w`?
bool scalar_better(const Solution& a, const Solution& b, std::span<const double> w, const NormBounds& bounds);

/// Expected instances per service for individual i of n:
/// (capacity / min_demand - 1) * i / n + 1.
double instance_target(double min_demand, double total_capacity, std::size_t i, std::size_t n);

/// floor(target) instances plus one more with probability frac(target).
std::uint32_t draw_instance_count(double target, std::mt19937_64& rng);

/// n genotypes with increasing instance counts, markers scattered uniformly
/// over servers, each mapped and evaluated.
std::vector<Solution> initialize_population(const ProblemInstance& problem, std::size_t n, ObjectiveModel model,
                                            std::mt19937_64& rng);

enum class NeighborOp : std::uint8_t { add, remove, move };

/// Applies one uniformly chosen operation. remove and move on an empty
/// genotype fall back to add.
Genotype neighbor(const Genotype& genotype, std::size_t n_services, std::mt19937_64& rng);
Genotype neighbor(const Genotype& genotype, std::size_t n_services, NeighborOp op, std::mt19937_64& rng);

struct SearchConfig {
  ObjectiveModel model = ObjectiveModel::accurate;
  std::size_t n_weights = 20;
  std::size_t subproblems_per_epoch = 4;
  std::size_t processes = 4;
  std::size_t max_evaluations = 12000;
  std::size_t init_population = 100;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on zero counts or a budget below the
  /// initial population.
  void validate() const;
};

struct SearchResult {
  std::vector<Solution> initial_population;
  Archive initial_archive;
  Archive final_archive;
  std::size_t evaluations = 0;
  std::size_t evaluations_per_weight = 0;
  std::size_t epochs = 0;
};

/// Weight-decomposed parallel local search. Weights are split into
/// contiguous epochs of `subproblems_per_epoch`; within an epoch, up to
/// `processes` threads each run one weight from the best archive member for
/// that weight, against a frozen copy of the archive and with an RNG seeded
/// from (seed, weight index). Per-weight archives are merged in weight order
/// at the end of the epoch, so results do not depend on thread count.
SearchResult optimize(const ProblemInstance& problem, const SearchConfig& config);

}  // namespace vnfp
