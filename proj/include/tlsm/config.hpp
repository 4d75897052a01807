#pragma once

#include <string>
#include <vector>

#include "tlsm/evolve.hpp"
#include "tlsm/physics.hpp"
#include "tlsm/readout.hpp"
#include "tlsm/schedule.hpp"

namespace tlsm {

// Full run configuration assembled from defaults, an optional key=value
// config file, and CLI overrides (applied in that order).
struct RunConfig {
  PhysicsConfig phys = default_config();
  SamplerConfig sampler;
  IntegratorConfig integ;
  FuzzinessSchedule sched;  // kind/param filled per cell by the harness

  bool dev_smoothed = true;  // deviation vs smoothed curve copies (or raw)
  int t_bins = 40;
  int v_bins = 40;

  std::vector<std::string> validate() const;
};

// Parse "key = value" lines ('#' comments, blank lines ignored) and apply
// them onto `cfg`. Keys use figure units where applicable. Unknown keys and
// malformed lines are reported, not applied. Returns the list of problems
// (empty on success).
std::vector<std::string> apply_config_file(RunConfig& cfg,
                                           const std::string& path);

// single key=value application; returns an error message or empty
std::string apply_config_kv(RunConfig& cfg, const std::string& key,
                            const std::string& value);

}  // namespace tlsm
