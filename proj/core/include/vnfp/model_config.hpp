#pragma once

#include <cstdint>

namespace vnfp {

/// Queueing and energy parameters shared by every objective model.
/// VNF service rates live on VnfKind; the rest is per queue class.
struct ModelConfig {
  double switch_rate = 100.0;   // packets/s of a physical switch queue
  double vswitch_rate = 100.0;  // packets/s of a server's virtual switch
  std::uint32_t queue_capacity = 20;  // K, maximum queue length

  double server_active = 200.0;  // watts while busy
  double server_idle = 100.0;    // watts while idle
  double switch_active = 150.0;
  double switch_idle = 75.0;

  double constant_wait = 1.0;   // per-hop wait for the constant-wait model
  double constant_loss = 0.01;  // per-hop loss for the constant-wait model

  double tolerance = 1e-9;  // fixed-point stopping threshold on arrival rates
  std::uint32_t max_iterations = 200;

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  bool operator==(const ModelConfig&) const = default;
};

/// Experiment defaults: both switch classes run at twice the fastest VNF,
/// K = 20, idle power at half of active power.
ModelConfig default_model_config(double max_vnf_rate);

}  // namespace vnfp
