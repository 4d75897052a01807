#pragma once

#include <string>
#include <vector>

namespace tlsm {

// Physical model of the driven two-level system in dimensionless units
// (hbar = 1). The drive is resonant; integration happens in the rotating
// frame where the coupling is real and the measurement damping is diagonal.
struct PhysicsConfig {
  double e1 = 0.0;          // ground level energy
  double e2 = 1.0;          // excited level energy
  double delta_e = 1.0;     // e2 - e1 (cached)
  double v0 = 1.0;          // coupling matrix element
  double t_total = 0.0;     // measurement window [0, T]
  double t1 = 0.0;          // pulse start
  double t2 = 0.0;          // pulse end; pi-pulse requires t2 - t1 = pi/v0
  double rabi_period = 0.0; // 2*pi/v0 (cached)
  double envelope_rise = 0.0;  // logistic ramp width

  // recompute cached fields
  void refresh();

  // empty when valid; otherwise human-readable violations
  std::vector<std::string> validate() const;
};

// canonical dimensionless setup: e1=0, e2=1, v0=1, T = T_R = 2*pi,
// pulse [T/4, 3T/4], rise = (t2-t1)/50
PhysicsConfig default_config();

// product of two logistic ramps centered at t1 and t2; exactly 0.5 at the
// ramp centers, ~1 deep inside the pulse, ~0 well outside
double pulse_envelope(double t, const PhysicsConfig& cfg);

// rotating-frame drive rate: v0 * envelope / 2 (the resonant coupling enters
// the Hamiltonian as v(t)/2 on the off-diagonal)
double rabi_rate(double t, const PhysicsConfig& cfg);

}  // namespace tlsm
