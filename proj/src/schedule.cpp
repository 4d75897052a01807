#include "tlsm/schedule.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tlsm {

const char* schedule_name(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kConstant: return "const";
    case ScheduleKind::kTimeGaussian: return "tgauss";
    case ScheduleKind::kEnergyGaussian: return "egauss";
  }
  return "?";
}

std::vector<std::string> FuzzinessSchedule::validate() const {
  std::vector<std::string> errs;
  if (!(t_eff_min > 0.0)) errs.push_back("schedule: t_eff_min must be > 0");
  if (!(t_eff_max > t_eff_min))
    errs.push_back("schedule: t_eff_max must exceed t_eff_min");
  if (!(t_eff_const > 0.0))
    errs.push_back("schedule: t_eff_const must be > 0");
  if (!(width_t > 0.0)) errs.push_back("schedule: width_t must be > 0");
  if (!(width_e > 0.0)) errs.push_back("schedule: width_e must be > 0");
  if (!(e_max_margin >= 0.0))
    errs.push_back("schedule: e_max_margin must be >= 0");
  return errs;
}

double t_eff_unit(const PhysicsConfig& phys) { return phys.rabi_period / 3.0; }

double width_t_unit(const PhysicsConfig& phys) { return phys.rabi_period / 2.0; }

namespace {

// bump profile a*lambda + b with lambda = exp(-x^2/(2w^2)) decaying from the
// center; pinned to `peak` at x = 0 and `edge_value` at |x| = edge
double bump(double x, double edge, double w, double peak, double edge_value) {
  const double lam = std::exp(-(x * x) / (2.0 * w * w));
  const double lam_edge = std::exp(-(edge * edge) / (2.0 * w * w));
  const double a = (peak - edge_value) / (1.0 - lam_edge);
  const double b = peak - a;
  return a * lam + b;
}

}  // namespace

double t_eff_at(const FuzzinessSchedule& sched, double t, double e_readout,
                const PhysicsConfig& phys) {
  if (!std::isfinite(e_readout))
    throw std::invalid_argument("t_eff_at: non-finite readout energy");
  const double unit = t_eff_unit(phys);
  switch (sched.kind) {
    case ScheduleKind::kConstant:
      return sched.t_eff_const * unit;
    case ScheduleKind::kTimeGaussian: {
      const double w = sched.width_t * width_t_unit(phys);
      const double half = phys.t_total / 2.0;
      const double v =
          bump(t - half, half, w, sched.t_eff_max, sched.t_eff_min);
      return std::max(v, sched.t_eff_min) * unit;
    }
    case ScheduleKind::kEnergyGaussian: {
      const double w = sched.width_e * phys.delta_e;
      const double mid = (phys.e1 + phys.e2) / 2.0;
      const double edge = phys.e2 + sched.e_max_margin * phys.delta_e - mid;
      const double v =
          bump(e_readout - mid, edge, w, sched.t_eff_max, sched.t_eff_min);
      // readouts beyond the band edge would dip below the floor; clamp
      return std::max(v, sched.t_eff_min) * unit;
    }
  }
  throw std::logic_error("t_eff_at: bad schedule kind");
}

double kappa_from_t_eff(double t_eff, const PhysicsConfig& phys) {
  if (!(t_eff > 0.0))
    throw std::invalid_argument("kappa_from_t_eff: t_eff must be > 0");
  return 4.0 * std::numbers::pi / (t_eff * phys.delta_e * phys.delta_e);
}

}  // namespace tlsm
