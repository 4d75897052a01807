#include "tlsm/evolve.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace tlsm {

std::vector<std::string> IntegratorConfig::validate() const {
  std::vector<std::string> errs;
  if (n_steps < 256) errs.push_back("integrator: n_steps must be >= 256");
  if (record_stride < 1)
    errs.push_back("integrator: record_stride must be >= 1");
  else if (n_steps % record_stride != 0)
    errs.push_back("integrator: record_stride must divide n_steps");
  return errs;
}

CellGrids build_cell_grids(const FuzzinessSchedule& sched,
                           const PhysicsConfig& phys,
                           const IntegratorConfig& icfg, int m_modes) {
  CellGrids g;
  g.n_steps = icfg.n_steps;
  g.record_stride = icfg.record_stride;
  g.m = m_modes;
  g.energy_dependent = sched.kind == ScheduleKind::kEnergyGaussian;
  const int np = 2 * icfg.n_steps + 1;  // half-step grid
  const double hh = phys.t_total / (2.0 * icfg.n_steps);
  g.omega.resize(np);
  g.sin_half.resize(static_cast<size_t>(np) * m_modes);
  for (int j = 0; j < np; ++j) {
    const double t = j * hh;
    g.omega[j] = rabi_rate(t, phys);
    const double w = std::numbers::pi * t / phys.t_total;
    for (int k = 0; k < m_modes; ++k)
      g.sin_half[static_cast<size_t>(j) * m_modes + k] = std::sin((k + 1) * w);
  }
  if (!g.energy_dependent) {
    g.kappa_t.resize(np);
    for (int j = 0; j < np; ++j)
      g.kappa_t[j] =
          kappa_from_t_eff(t_eff_at(sched, j * hh, phys.e1, phys), phys);
  }
  return g;
}

void evolve_on_grids(const ReadoutCurve& curve, const FuzzinessSchedule& sched,
                     const PhysicsConfig& phys, const IntegratorConfig& icfg,
                     const CellGrids& grids, EvolveWorkspace& ws,
                     TrajectoryResult& out) {
  if (static_cast<int>(curve.coeffs.size()) != grids.m)
    throw std::invalid_argument("evolve: curve mode count mismatches grids");
  const int n = grids.n_steps;
  const int np = 2 * n + 1;
  const int stride = grids.record_stride;
  const double h = phys.t_total / n;
  const double hh = h / 2.0;

  ws.e_half.resize(np);
  ws.d1.resize(np);
  ws.d2.resize(np);
  // curve on the half grid: linear trend plus the sine series
  for (int j = 0; j < np; ++j) {
    const double* row = &grids.sin_half[static_cast<size_t>(j) * grids.m];
    double v = curve.trend(j * hh);
    for (int k = 0; k < grids.m; ++k) v += curve.coeffs[k] * row[k];
    ws.e_half[j] = v;
  }
  // damping rates kappa*(e_i - E)^2
  if (grids.energy_dependent) {
    for (int j = 0; j < np; ++j) {
      const double e = ws.e_half[j];
      const double kap = kappa_from_t_eff(t_eff_at(sched, j * hh, e, phys), phys);
      const double x1 = phys.e1 - e;
      const double x2 = phys.e2 - e;
      ws.d1[j] = kap * x1 * x1;
      ws.d2[j] = kap * x2 * x2;
    }
  } else {
    for (int j = 0; j < np; ++j) {
      const double e = ws.e_half[j];
      const double kap = grids.kappa_t[j];
      const double x1 = phys.e1 - e;
      const double x2 = phys.e2 - e;
      ws.d1[j] = kap * x1 * x1;
      ws.d2[j] = kap * x2 * x2;
    }
  }

  const int nr = n / stride + 1;
  out.c2sq.resize(nr);
  out.norm2.resize(nr);
  out.c2sq[0] = 0.0;
  out.norm2[0] = 1.0;
  out.underflow = false;

  using cplx = std::complex<double>;
  const double* om = grids.omega.data();
  const double* d1 = ws.d1.data();
  const double* d2 = ws.d2.data();
  // rhs of the damped rotating-frame pair at half-grid index jj
  const auto rhs = [om, d1, d2](cplx x1, cplx x2, int jj, cplx& f1, cplx& f2) {
    const double o = om[jj];
    f1 = cplx(o * x2.imag() - d1[jj] * x1.real(),
              -o * x2.real() - d1[jj] * x1.imag());
    f2 = cplx(o * x1.imag() - d2[jj] * x2.real(),
              -o * x1.real() - d2[jj] * x2.imag());
  };

  cplx c1(1.0, 0.0), c2(0.0, 0.0);
  double log_scale = 0.0;  // accumulated log of stripped-off norm factors
  for (int i = 0; i < n; ++i) {
    const int j = 2 * i;
    cplx k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
    rhs(c1, c2, j, k1a, k1b);
    rhs(c1 + hh * k1a, c2 + hh * k1b, j + 1, k2a, k2b);
    rhs(c1 + hh * k2a, c2 + hh * k2b, j + 1, k3a, k3b);
    rhs(c1 + h * k3a, c2 + h * k3b, j + 2, k4a, k4b);
    c1 += (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
    c2 += (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
    if ((i + 1) % stride == 0) {
      const double a1 = std::norm(c1), a2 = std::norm(c2);
      const double n2 = a1 + a2;
      if (!std::isfinite(n2))
        throw IntegrationError(i + 1, "evolve: non-finite state");
      const int r = (i + 1) / stride;
      out.c2sq[r] = a2 / n2;
      out.norm2[r] = log_scale == 0.0 ? n2 : std::exp(log_scale) * n2;
      if (n2 < 1e-150) {
        // renormalize to keep the linear ODE well-scaled; the stripped
        // factor is remembered but the weight is reported as underflowed
        log_scale += std::log(n2);
        const double s = 1.0 / std::sqrt(n2);
        c1 *= s;
        c2 *= s;
      }
    }
  }
  out.final_c2sq = out.c2sq.back();
  if (log_scale == 0.0) {
    out.weight = out.norm2.back();
  } else {
    out.weight = 0.0;
    out.underflow = true;
  }
}

TrajectoryResult evolve(const ReadoutCurve& curve,
                        const FuzzinessSchedule& sched,
                        const PhysicsConfig& phys,
                        const IntegratorConfig& icfg) {
  const CellGrids grids = build_cell_grids(
      sched, phys, icfg, static_cast<int>(curve.coeffs.size()));
  EvolveWorkspace ws;
  TrajectoryResult out;
  evolve_on_grids(curve, sched, phys, icfg, grids, ws, out);
  return out;
}

double weight_of(const ReadoutCurve& curve, const FuzzinessSchedule& sched,
                 const PhysicsConfig& phys, const IntegratorConfig& icfg) {
  return evolve(curve, sched, phys, icfg).weight;
}

}  // namespace tlsm
