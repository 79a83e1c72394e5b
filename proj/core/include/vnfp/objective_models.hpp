#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vnfp/queueing.hpp"
#include "vnfp/services.hpp"

namespace vnfp {

/// How a placement is scored.
///
/// accurate, mm1k, mm1 and cwtpl produce (latency, loss, energy);
/// utilization, ru and plus produce two objectives.
enum class ObjectiveModel : std::uint8_t { accurate, mm1k, mm1, utilization, cwtpl, ru, plus };

std::string_view to_string(ObjectiveModel model) noexcept;
std::optional<ObjectiveModel> parse_model(std::string_view name) noexcept;
std::size_t model_arity(ObjectiveModel model) noexcept;

struct ObjectiveVector {
  ObjectiveModel model = ObjectiveModel::accurate;
  std::vector<double> values;  // all minimized

  std::size_t arity() const noexcept { return values.size(); }
  bool operator==(const ObjectiveVector&) const = default;
};

/// Arrival rate per queue, indexed by Placement::queue_index().
using QueueLoads = std::vector<double>;

/// Service rate of every queue of the placement.
std::vector<double> queue_service_rates(const Placement& placement, const ProblemInstance& problem);

/// Loss-free superposition: each route hop receives arrival_rate * weight.
QueueLoads propagate_open(const Placement& placement, const ProblemInstance& problem);

struct FixedPointResult {
  QueueLoads loads;
  bool converged = false;
  std::uint32_t sweeps = 0;
  double residual = 0.0;  // largest per-queue change in the final sweep
};

/// Loss-aware arrival rates. Each sweep walks every route in order, replacing
/// that route's contribution at each hop with the upstream-attenuated rate
/// and immediately refreshing the hop's M/M/1/K loss, so one sweep is exact
/// for a single feed-forward route. Stops once no queue's rate moves by more
/// than `tolerance`, or after `max_sweeps`; the last iterate is returned either way.
FixedPointResult propagate_fixed_point(const Placement& placement, const ProblemInstance& problem,
                                       double tolerance, std::uint32_t max_sweeps);
FixedPointResult propagate_fixed_point(const Placement& placement, const ProblemInstance& problem);

enum class QueueModel : std::uint8_t { bounded, unbounded };

std::vector<QueueStats> queue_stats(const Placement& placement, const ProblemInstance& problem,
                                    const QueueLoads& loads, QueueModel model);

struct ServiceMetric {
  std::vector<double> per_service;
  double mean = 0.0;
};

/// Route wait is the sum of queue waits; a service averages its routes by weight.
ServiceMetric service_latency(const Placement& placement, std::span<const QueueStats> stats);
/// Route loss is 1 - prod(1 - loss); a service averages its routes by weight.
ServiceMetric service_loss(const Placement& placement, std::span<const QueueStats> stats);

/// Three-state power model. Components no route touches are off; a switch is
/// busy with its queue's utilization, a server with the combined utilization
/// of its virtual switch and hosted VNFs. `util` is indexed like QueueLoads.
double energy_from_utilization(const Placement& placement, const ProblemInstance& problem,
                               std::span<const double> util);
double energy(const Placement& placement, const ProblemInstance& problem, std::span<const QueueStats> stats);

/// Scores a placement regardless of its feasibility.
ObjectiveVector evaluate_placement(const Placement& placement, const ProblemInstance& problem,
                                   ObjectiveModel model);

/// Scores a mapping result; infeasible mappings get no objectives.
std::optional<ObjectiveVector> evaluate(const MappingResult& mapping, const ProblemInstance& problem,
                                        ObjectiveModel model);

/// Per-queue dump for debugging:
/// queue,component,class,vnf,arrival,effective,wait,loss,util
std::string trace_csv(const Placement& placement, const ProblemInstance& problem,
                      std::span<const QueueStats> stats);

}  // namespace vnfp
