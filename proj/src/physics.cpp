#include "tlsm/physics.hpp"

#include <cmath>
#include <numbers>

namespace tlsm {

namespace {

// numerically stable logistic
double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

void PhysicsConfig::refresh() {
  delta_e = e2 - e1;
  // with no drive there is no Rabi period; fall back to the splitting period
  // so schedule unit conversions stay finite
  const double scale = v0 > 0.0 ? v0 : delta_e;
  rabi_period = scale > 0.0 ? 2.0 * std::numbers::pi / scale : 0.0;
}

std::vector<std::string> PhysicsConfig::validate() const {
  std::vector<std::string> errs;
  if (!(e2 > e1)) errs.push_back("physics: e2 must exceed e1");
  if (delta_e != e2 - e1) errs.push_back("physics: delta_e out of sync");
  if (!(t1 >= 0.0 && t1 < t2 && t2 <= t_total))
    errs.push_back("physics: need 0 <= t1 < t2 <= t_total");
  if (v0 > 0.0) {
    // pi-pulse condition: pulse duration equals pi/v0
    const double want = std::numbers::pi / v0;
    if (std::abs((t2 - t1) - want) / (t2 - t1) >= 1e-12)
      errs.push_back("physics: pulse duration must equal pi/v0 (pi-pulse)");
  } else if (v0 < 0.0) {
    errs.push_back("physics: v0 must be >= 0");
  }
  if (!(envelope_rise > 0.0 && envelope_rise < (t2 - t1) / 10.0))
    errs.push_back("physics: envelope_rise must be in (0, (t2-t1)/10)");
  return errs;
}

PhysicsConfig default_config() {
  PhysicsConfig cfg;
  cfg.e1 = 0.0;
  cfg.e2 = 1.0;
  cfg.v0 = 1.0;
  cfg.t_total = 2.0 * std::numbers::pi;  // one Rabi period
  cfg.t1 = cfg.t_total / 4.0;
  cfg.t2 = 3.0 * cfg.t_total / 4.0;
  cfg.envelope_rise = (cfg.t2 - cfg.t1) / 50.0;
  cfg.refresh();
  return cfg;
}

double pulse_envelope(double t, const PhysicsConfig& cfg) {
  return sigmoid((t - cfg.t1) / cfg.envelope_rise) *
         sigmoid((cfg.t2 - t) / cfg.envelope_rise);
}

double rabi_rate(double t, const PhysicsConfig& cfg) {
  return 0.5 * cfg.v0 * pulse_envelope(t, cfg);
}

}  // namespace tlsm
