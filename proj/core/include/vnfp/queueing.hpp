#pragma once

#include <cstdint>
#include <span>

namespace vnfp {

/// Steady-state figures of one queue.
struct QueueStats {
  double arrival = 0.0;    // offered rate, lambda
  double effective = 0.0;  // admitted rate, lambda * (1 - loss)
  double wait = 0.0;       // mean sojourn time; +inf for an unstable M/M/1
  double loss = 0.0;       // drop probability
  double util = 0.0;       // fraction of time busy
  double mean_length = 0.0;
};

/// Unbounded M/M/1. Finite wait only while arrival < service; loss is 0.
/// Throws std::invalid_argument for negative or non-finite inputs or service <= 0.
QueueStats mm1_stats(double arrival, double service);

/// M/M/1/K with K = capacity. Utilization is 1 - P(empty); an idle queue
/// (arrival 0) reports zero wait, loss and utilization.
/// Throws std::invalid_argument for non-finite inputs, service <= 0 or capacity < 1.
QueueStats mm1k_stats(double arrival, double service, std::uint32_t capacity);

/// Probability the M/M/1/K queue is busy: 0 when idle, else 1 - P(empty).
double queue_active_period(double arrival, double service, std::uint32_t capacity);

/// A server is idle only when its virtual switch and every hosted VNF are idle.
double server_utilization(double vswitch_active, std::span<const double> vnf_actives);

}  // namespace vnfp
