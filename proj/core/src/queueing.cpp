#include "vnfp/queueing.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vnfp {

namespace {

void check_rates(double arrival, double service) {
  if (!std::isfinite(arrival) || !std::isfinite(service)) throw std::invalid_argument("queue rates must be finite");
  if (arrival < 0) throw std::invalid_argument("arrival rate must be non-negative");
  if (service <= 0) throw std::invalid_argument("service rate must be positive");
}

/// Truncated geometric distribution p_k ∝ r^k on 0..K with r < 1 (or r > 1
/// handled by the caller through reflection). Returns P(0), P(K) and the mean.
struct Truncated {
  double p_first;
  double p_last;
  double mean;
};

Truncated truncated_geometric(double r, std::uint32_t k) {
  const double kk = static_cast<double>(k);
  const double r_k = std::pow(r, kk);
  const double r_k1 = r_k * r;
  const double denom = 1.0 - r_k1;
  return {(1.0 - r) / denom, (1.0 - r) * r_k / denom,
          r * (1.0 - (kk + 1.0) * r_k + kk * r_k1) / ((1.0 - r) * denom)};
}

}  // namespace

QueueStats mm1_stats(double arrival, double service) {
  check_rates(arrival, service);
  QueueStats q;
  q.arrival = arrival;
  q.effective = arrival;
  q.loss = 0.0;
  q.util = std::min(arrival / service, 1.0);
  if (arrival < service) {
    q.wait = 1.0 / (service - arrival);
    q.mean_length = arrival * q.wait;
  } else {
    q.wait = std::numeric_limits<double>::infinity();
    q.mean_length = std::numeric_limits<double>::infinity();
  }
  return q;
}

QueueStats mm1k_stats(double arrival, double service, std::uint32_t capacity) {
  check_rates(arrival, service);
  if (capacity < 1) throw std::invalid_argument("queue capacity must be >= 1");
  QueueStats q;
  q.arrival = arrival;
  if (arrival == 0.0) return q;

  const double k = static_cast<double>(capacity);
  double p_empty = 0.0;
  if (arrival == service) {
    p_empty = 1.0 / (k + 1.0);
    q.loss = 1.0 / (k + 1.0);
    q.mean_length = k / 2.0;
  } else if (arrival < service) {
    const auto t = truncated_geometric(arrival / service, capacity);
    p_empty = t.p_first;
    q.loss = t.p_last;
    q.mean_length = t.mean;
  } else {
    // Reflect j = K - n so the geometric ratio is 1/rho < 1; avoids rho^K overflow.
    const auto t = truncated_geometric(service / arrival, capacity);
    p_empty = t.p_last;
    q.loss = t.p_first;
    q.mean_length = k - t.mean;
  }
  q.effective = arrival * (1.0 - q.loss);
  q.util = 1.0 - p_empty;
  q.wait = q.mean_length / q.effective;
  return q;
}

double queue_active_period(double arrival, double service, std::uint32_t capacity) {
  check_rates(arrival, service);
  if (capacity < 1) throw std::invalid_argument("queue capacity must be >= 1");
  if (arrival == 0.0) return 0.0;
  const double k = static_cast<double>(capacity);
  if (arrival == service) return k / (k + 1.0);
  if (arrival < service) {
    const double r = arrival / service;
    return 1.0 - (1.0 - r) / (1.0 - std::pow(r, k + 1.0));
  }
  const double r = service / arrival;
  const double r_k = std::pow(r, k);
  return 1.0 - r_k * (1.0 - r) / (1.0 - r_k * r);
}

double server_utilization(double vswitch_active, std::span<const double> vnf_actives) {
  double idle = 1.0 - vswitch_active;
  for (double u : vnf_actives) idle *= 1.0 - u;
  return 1.0 - idle;
}

}  // namespace vnfp
