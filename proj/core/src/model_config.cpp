#include "vnfp/model_config.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vnfp {

void ModelConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("model config: ") + what);
  };
  require(switch_rate > 0 && std::isfinite(switch_rate), "switch_rate must be positive");
  require(vswitch_rate > 0 && std::isfinite(vswitch_rate), "vswitch_rate must be positive");
  require(queue_capacity >= 1, "queue_capacity must be >= 1");
  require(server_active >= 0 && server_idle >= 0, "server energy must be non-negative");
  require(switch_active >= 0 && switch_idle >= 0, "switch energy must be non-negative");
  require(constant_wait >= 0, "constant_wait must be non-negative");
  require(constant_loss >= 0 && constant_loss < 1, "constant_loss must lie in [0, 1)");
  require(tolerance > 0, "tolerance must be positive");
  require(max_iterations >= 1, "max_iterations must be >= 1");
}

ModelConfig default_model_config(double max_vnf_rate) {
  ModelConfig cfg;
  cfg.switch_rate = 2.0 * max_vnf_rate;
  cfg.vswitch_rate = 2.0 * max_vnf_rate;
  cfg.queue_capacity = 20;
  cfg.server_idle = 0.5 * cfg.server_active;
  cfg.switch_idle = 0.5 * cfg.switch_active;
  return cfg;
}

}  // namespace vnfp
