#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tlsm/physics.hpp"
#include "tlsm/readout.hpp"
#include "tlsm/schedule.hpp"

namespace tlsm {

struct IntegratorConfig {
  int n_steps = 4096;     // fixed RK4 steps over [0, T]
  int record_stride = 4;  // series downsampling factor

  std::vector<std::string> validate() const;
  int n_recorded() const { return n_steps / record_stride + 1; }
};

struct TrajectoryResult {
  double weight = 0.0;      // squared norm of the final unnormalized state
  double final_c2sq = 0.0;  // normalized |c2(T)|^2
  std::vector<double> c2sq;   // normalized series on the recording grid
  std::vector<double> norm2;  // unnormalized squared norm, same grid
  bool underflow = false;     // norm fell below 1e-150; weight forced to 0
};

// non-finite state detected mid-integration
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(int step, const std::string& what)
      : std::runtime_error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

// Precomputed per-cell evaluation grids shared by all trajectories of one
// (schedule, physics, integrator) combination. Time grid: half-step points
// t_j = j*h/2, j = 0..2n, covering every RK4 substage.
struct CellGrids {
  int n_steps = 0;
  int record_stride = 0;
  int m = 0;
  std::vector<double> omega;     // rabi_rate at half-grid points
  std::vector<double> sin_half;  // (2n+1) x m row-major: sin(k*pi*t_j/T)
  std::vector<double> kappa_t;   // kappa at half-grid (empty if energy-dep.)
  bool energy_dependent = false;
};

CellGrids build_cell_grids(const FuzzinessSchedule& sched,
                           const PhysicsConfig& phys,
                           const IntegratorConfig& icfg, int m_modes);

// scratch buffers reused across trajectories by one worker
struct EvolveWorkspace {
  std::vector<double> e_half;  // curve values on the half grid
  std::vector<double> d1, d2;  // damping rates for each amplitude
};

// Integrates the damped rotating-frame pair
//   dc1/dt = -i*omega(t)*c2 - kappa(t)*(e1 - E(t))^2 * c1
//   dc2/dt = -i*omega(t)*c1 - kappa(t)*(e2 - E(t))^2 * c2
// from (1, 0) with classical fixed-step RK4, recording the normalized
// |c2|^2 and the unnormalized squared norm every record_stride steps.
void evolve_on_grids(const ReadoutCurve& curve, const FuzzinessSchedule& sched,
                     const PhysicsConfig& phys, const IntegratorConfig& icfg,
                     const CellGrids& grids, EvolveWorkspace& ws,
                     TrajectoryResult& out);

// convenience wrapper building grids for a single trajectory
TrajectoryResult evolve(const ReadoutCurve& curve,
                        const FuzzinessSchedule& sched,
                        const PhysicsConfig& phys,
                        const IntegratorConfig& icfg);

// weight-only projection of evolve
double weight_of(const ReadoutCurve& curve, const FuzzinessSchedule& sched,
                 const PhysicsConfig& phys, const IntegratorConfig& icfg);

}  // namespace tlsm
