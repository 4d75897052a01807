#pragma once

#include <string>
#include <vector>

#include "tlsm/physics.hpp"

namespace tlsm {

enum class ScheduleKind { kConstant, kTimeGaussian, kEnergyGaussian };

const char* schedule_name(ScheduleKind kind);

// Fuzziness rule giving the effective resolution time T_eff, from which the
// damping strength follows as kappa = 4*pi/(T_eff*delta_e^2). Parameters are
// stored in figure units: t_eff values in T_R/3, width_t in T_R/2, width_e in
// delta_e; conversion to internal units happens on evaluation.
struct FuzzinessSchedule {
  ScheduleKind kind = ScheduleKind::kConstant;
  double t_eff_const = 5.0;
  double t_eff_max = 10.0;    // peak value (bump center)
  double t_eff_min = 2.0;     // edge value and hard floor
  double width_t = 0.2;       // time-Gaussian width
  double width_e = 0.3;       // energy-Gaussian width
  double e_max_margin = 0.5;  // energy anchor e2 + margin*delta_e

  std::vector<std::string> validate() const;
};

// unit carried by t_eff parameters (T_R/3)
double t_eff_unit(const PhysicsConfig& phys);

// unit carried by width_t (T_R/2)
double width_t_unit(const PhysicsConfig& phys);

// T_eff at (t, readout energy) in internal time units. The Gaussian profiles
// are bumps a*lambda + b with lambda decaying away from the center,
// a = (max - min)/(1 - lambda(edge)), b = max - a, clamped below at
// t_eff_min (the clamp only binds for readout energies beyond the band edge).
// Throws std::invalid_argument for non-finite e_readout.
double t_eff_at(const FuzzinessSchedule& sched, double t, double e_readout,
                const PhysicsConfig& phys);

// kappa = 4*pi/(t_eff*delta_e^2), t_eff in internal units; throws for
// t_eff <= 0
double kappa_from_t_eff(double t_eff, const PhysicsConfig& phys);

}  // namespace tlsm
