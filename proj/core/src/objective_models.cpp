#include "vnfp/objective_models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vnfp {

std::string_view to_string(ObjectiveModel model) noexcept {
  switch (model) {
    case ObjectiveModel::accurate: return "accurate";
    case ObjectiveModel::mm1k: return "mm1k";
    case ObjectiveModel::mm1: return "mm1";
    case ObjectiveModel::utilization: return "utilization";
    case ObjectiveModel::cwtpl: return "cwtpl";
    case ObjectiveModel::ru: return "ru";
    case ObjectiveModel::plus: return "plus";
  }
  return "accurate";
}

std::optional<ObjectiveModel> parse_model(std::string_view name) noexcept {
  for (auto m : {ObjectiveModel::accurate, ObjectiveModel::mm1k, ObjectiveModel::mm1, ObjectiveModel::utilization,
                 ObjectiveModel::cwtpl, ObjectiveModel::ru, ObjectiveModel::plus}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

std::size_t model_arity(ObjectiveModel model) noexcept {
  switch (model) {
    case ObjectiveModel::utilization:
    case ObjectiveModel::ru:
    case ObjectiveModel::plus: return 2;
    default: return 3;
  }
}

std::vector<double> queue_service_rates(const Placement& placement, const ProblemInstance& problem) {
  const Topology& topology = *problem.topology;
  std::vector<double> rates(placement.queue_count());
  for (ComponentId c = 0; c < placement.n_components; ++c) {
    rates[c] = topology.is_server(c) ? problem.model.vswitch_rate : problem.model.switch_rate;
  }
  for (std::size_t v = 0; v < placement.vnf_queues.size(); ++v) {
    rates[placement.n_components + v] = problem.vnfs[placement.vnf_queues[v].kind].service_rate;
  }
  return rates;
}

QueueLoads propagate_open(const Placement& placement, const ProblemInstance& problem) {
  QueueLoads loads(placement.queue_count(), 0.0);
  for (std::size_t s = 0; s < placement.services.size(); ++s) {
    const double rate = problem.services[s].arrival_rate;
    for (const auto& inst : placement.services[s]) {
      const double share = rate * inst.weight;
      for (const auto& q : inst.route) loads[placement.queue_index(q)] += share;
    }
  }
  return loads;
}

FixedPointResult propagate_fixed_point(const Placement& placement, const ProblemInstance& problem, double tolerance,
                                       std::uint32_t max_sweeps) {
  if (!(tolerance > 0)) throw std::invalid_argument("fixed-point tolerance must be positive");
  const auto rates = queue_service_rates(placement, problem);
  const std::uint32_t k = problem.model.queue_capacity;

  FixedPointResult result;
  result.loads = propagate_open(placement, problem);
  auto& loads = result.loads;

  // Current contribution of every (route, hop), starting from the open model.
  std::vector<double> contrib;
  for (std::size_t s = 0; s < placement.services.size(); ++s) {
    for (const auto& inst : placement.services[s]) {
      contrib.insert(contrib.end(), inst.route.size(), problem.services[s].arrival_rate * inst.weight);
    }
  }

  QueueLoads before;
  while (result.sweeps < max_sweeps) {
    before = loads;
    std::size_t slot = 0;
    for (std::size_t s = 0; s < placement.services.size(); ++s) {
      for (const auto& inst : placement.services[s]) {
        double rate = problem.services[s].arrival_rate * inst.weight;
        for (const auto& q : inst.route) {
          const std::size_t idx = placement.queue_index(q);
          loads[idx] = std::max(0.0, loads[idx] + rate - contrib[slot]);
          contrib[slot++] = rate;
          rate *= 1.0 - mm1k_stats(loads[idx], rates[idx], k).loss;
        }
      }
    }
    ++result.sweeps;
    result.residual = 0.0;
    for (std::size_t i = 0; i < loads.size(); ++i) {
      result.residual = std::max(result.residual, std::abs(loads[i] - before[i]));
    }
    if (result.residual < tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

FixedPointResult propagate_fixed_point(const Placement& placement, const ProblemInstance& problem) {
  return propagate_fixed_point(placement, problem, problem.model.tolerance, problem.model.max_iterations);
}

std::vector<QueueStats> queue_stats(const Placement& placement, const ProblemInstance& problem,
                                    const QueueLoads& loads, QueueModel model) {
  const auto rates = queue_service_rates(placement, problem);
  std::vector<QueueStats> stats(loads.size());
  for (std::size_t i = 0; i < loads.size(); ++i) {
    if (loads[i] == 0.0) {
      stats[i] = QueueStats{};
      if (model == QueueModel::unbounded) stats[i] = mm1_stats(0.0, rates[i]);
      continue;
    }
    stats[i] = model == QueueModel::bounded ? mm1k_stats(loads[i], rates[i], problem.model.queue_capacity)
                                            : mm1_stats(loads[i], rates[i]);
  }
  return stats;
}

namespace {

template <typename PerRoute>
ServiceMetric per_service_mean(const Placement& placement, PerRoute per_route) {
  ServiceMetric m;
  m.per_service.reserve(placement.services.size());
  for (const auto& instances : placement.services) {
    double value = 0.0;
    for (const auto& inst : instances) value += per_route(inst) * inst.weight;
    m.per_service.push_back(value);
  }
  if (!m.per_service.empty()) {
    double sum = 0.0;
    for (double v : m.per_service) sum += v;
    m.mean = sum / static_cast<double>(m.per_service.size());
  }
  return m;
}

std::size_t physical_length(const std::vector<QueueRef>& route) {
  std::size_t n = 0;
  for (std::size_t h = 0; h < route.size(); ++h) {
    if (h == 0 || route[h].component != route[h - 1].component) ++n;
  }
  return n;
}

}  // namespace

ServiceMetric service_latency(const Placement& placement, std::span<const QueueStats> stats) {
  return per_service_mean(placement, [&](const ServiceInstance& inst) {
    double w = 0.0;
    for (const auto& q : inst.route) w += stats[placement.queue_index(q)].wait;
    return w;
  });
}

ServiceMetric service_loss(const Placement& placement, std::span<const QueueStats> stats) {
  return per_service_mean(placement, [&](const ServiceInstance& inst) {
    double pass = 1.0;
    for (const auto& q : inst.route) pass *= 1.0 - stats[placement.queue_index(q)].loss;
    return 1.0 - pass;
  });
}

double energy_from_utilization(const Placement& placement, const ProblemInstance& problem,
                               std::span<const double> util) {
  const Topology& topology = *problem.topology;
  const auto& cfg = problem.model;

  std::vector<char> on(placement.n_components, 0);
  for (const auto& instances : placement.services) {
    for (const auto& inst : instances) {
      for (const auto& q : inst.route) on[q.component] = 1;
    }
  }
  // Server idle probability starts with the virtual switch and folds in each VNF.
  std::vector<double> idle(topology.n_servers(), 1.0);
  for (ServerId s = 0; s < topology.n_servers(); ++s) idle[s] = 1.0 - util[s];
  for (std::size_t v = 0; v < placement.vnf_queues.size(); ++v) {
    const ServerId host = placement.vnf_queues[v].server;
    on[host] = 1;
    idle[host] *= 1.0 - util[placement.n_components + v];
  }

  double total = 0.0;
  for (ComponentId c = 0; c < placement.n_components; ++c) {
    if (!on[c]) continue;
    if (topology.is_server(c)) {
      const double u = 1.0 - idle[c];
      total += u * cfg.server_active + (1.0 - u) * cfg.server_idle;
    } else {
      const double u = util[c];
      total += u * cfg.switch_active + (1.0 - u) * cfg.switch_idle;
    }
  }
  return total;
}

double energy(const Placement& placement, const ProblemInstance& problem, std::span<const QueueStats> stats) {
  std::vector<double> util(stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i) util[i] = stats[i].util;
  return energy_from_utilization(placement, problem, util);
}

namespace {

double accurate_energy(const Placement& placement, const ProblemInstance& problem) {
  const auto fp = propagate_fixed_point(placement, problem);
  const auto stats = queue_stats(placement, problem, fp.loads, QueueModel::bounded);
  return energy(placement, problem, stats);
}

ObjectiveVector queueing_objectives(const Placement& placement, const ProblemInstance& problem,
                                    const QueueLoads& loads, QueueModel qm, ObjectiveModel model) {
  const auto stats = queue_stats(placement, problem, loads, qm);
  return {model,
          {service_latency(placement, stats).mean, service_loss(placement, stats).mean,
           energy(placement, problem, stats)}};
}

}  // namespace

ObjectiveVector evaluate_placement(const Placement& placement, const ProblemInstance& problem, ObjectiveModel model) {
  switch (model) {
    case ObjectiveModel::accurate:
      return queueing_objectives(placement, problem, propagate_fixed_point(placement, problem).loads,
                                 QueueModel::bounded, model);
    case ObjectiveModel::mm1k:
      return queueing_objectives(placement, problem, propagate_open(placement, problem), QueueModel::bounded, model);
    case ObjectiveModel::mm1:
      return queueing_objectives(placement, problem, propagate_open(placement, problem), QueueModel::unbounded,
                                 model);

    case ObjectiveModel::utilization: {
      // Open-model rates drive both the per-path utilization sum and the
      // active periods used for energy.
      const auto loads = propagate_open(placement, problem);
      const auto rates = queue_service_rates(placement, problem);
      std::vector<double> rho(loads.size());
      std::vector<double> active(loads.size());
      for (std::size_t i = 0; i < loads.size(); ++i) {
        rho[i] = loads[i] / rates[i];
        active[i] = loads[i] == 0.0 ? 0.0 : queue_active_period(loads[i], rates[i], problem.model.queue_capacity);
      }
      const auto u = per_service_mean(placement, [&](const ServiceInstance& inst) {
        double sum = 0.0;
        for (const auto& q : inst.route) sum += rho[placement.queue_index(q)];
        return sum;
      });
      return {model, {u.mean, energy_from_utilization(placement, problem, active)}};
    }

    case ObjectiveModel::cwtpl: {
      const double w0 = problem.model.constant_wait;
      const double pass0 = 1.0 - problem.model.constant_loss;
      const auto lat = per_service_mean(
          placement, [&](const ServiceInstance& inst) { return w0 * static_cast<double>(inst.route.size()); });
      const auto loss = per_service_mean(placement, [&](const ServiceInstance& inst) {
        return 1.0 - std::pow(pass0, static_cast<double>(inst.route.size()));
      });
      return {model, {lat.mean, loss.mean, accurate_energy(placement, problem)}};
    }

    case ObjectiveModel::ru: {
      // Wait proxy: each VNF visit costs its host's used / total capacity.
      const auto lat = per_service_mean(placement, [&](const ServiceInstance& inst) {
        double sum = 0.0;
        for (const auto& q : inst.route) {
          if (q.cls == QueueClass::vnf) sum += placement.used_capacity[q.component] / problem.server_capacity;
        }
        return sum;
      });
      return {model, {lat.mean, accurate_energy(placement, problem)}};
    }

    case ObjectiveModel::plus: {
      const auto len = per_service_mean(
          placement, [&](const ServiceInstance& inst) { return static_cast<double>(physical_length(inst.route)); });
      std::size_t used = 0;
      for (double c : placement.used_capacity) used += c > 0.0 ? 1 : 0;
      const double n = static_cast<double>(std::max<std::size_t>(1, placement.used_capacity.size()));
      return {model, {len.mean, static_cast<double>(used) / n}};
    }
  }
  throw std::invalid_argument("unknown objective model");
}

std::optional<ObjectiveVector> evaluate(const MappingResult& mapping, const ProblemInstance& problem,
                                        ObjectiveModel model) {
  if (!mapping.report.feasible) return std::nullopt;
  return evaluate_placement(mapping.placement, problem, model);
}

std::string trace_csv(const Placement& placement, const ProblemInstance& problem, std::span<const QueueStats> stats) {
  const Topology& topology = *problem.topology;
  std::ostringstream out;
  out.precision(17);
  out << "queue,component,class,vnf,arrival,effective,wait,loss,util\n";
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const auto& s = stats[i];
    if (s.arrival == 0.0) continue;
    ComponentId component = 0;
    std::string_view cls;
    long long vnf = -1;
    if (i < placement.n_components) {
      component = static_cast<ComponentId>(i);
      cls = topology.is_server(component) ? "vswitch" : "switch";
    } else {
      vnf = static_cast<long long>(i - placement.n_components);
      component = placement.vnf_queues[static_cast<std::size_t>(vnf)].server;
      cls = "vnf";
    }
    out << i << ',' << component << ',' << cls << ',' << vnf << ',' << s.arrival << ',' << s.effective << ','
        << s.wait << ',' << s.loss << ',' << s.util << '\n';
  }
  return out.str();
}

}  // namespace vnfp
