#include "tlsm/readout.hpp"

#include <cmath>
#include <numbers>

namespace tlsm {

double smooth_factor(int k) {
  const double x = static_cast<double>(k) / 3.0;
  return std::exp(-x * x);
}

double ReadoutCurve::eval(double t) const {
  const double w = std::numbers::pi * t / t_total;
  double v = trend(t);
  for (size_t k = 0; k < coeffs.size(); ++k)
    v += coeffs[k] * std::sin(static_cast<double>(k + 1) * w);
  return v;
}

double ReadoutCurve::eval_smoothed(double t) const {
  const double w = std::numbers::pi * t / t_total;
  double v = trend(t);
  for (size_t k = 0; k < coeffs.size(); ++k)
    v += coeffs[k] * smooth_factor(static_cast<int>(k + 1)) *
         std::sin(static_cast<double>(k + 1) * w);
  return v;
}

std::vector<std::string> SamplerConfig::validate() const {
  std::vector<std::string> errs;
  if (m < 1) errs.push_back("sampler: m must be >= 1");
  if (!(amp_fraction > 0.0)) errs.push_back("sampler: amp_fraction must be > 0");
  if (margin_fraction < 0.0)
    errs.push_back("sampler: margin_fraction must be >= 0");
  return errs;
}

ReadoutCurve smooth_readout(const ReadoutCurve& curve) {
  ReadoutCurve out = curve;
  for (size_t k = 0; k < out.coeffs.size(); ++k)
    out.coeffs[k] *= smooth_factor(static_cast<int>(k + 1));
  return out;
}

ReadoutCurve sample_readout(SplitMix64& rng, const SamplerConfig& cfg,
                            const PhysicsConfig& phys) {
  const double lo = phys.e1 - cfg.margin_fraction * phys.delta_e;
  const double hi = phys.e2 + cfg.margin_fraction * phys.delta_e;
  const double amp = cfg.amp_fraction * phys.delta_e;
  ReadoutCurve curve;
  curve.t_total = phys.t_total;
  curve.e_start = rng.uniform(lo, hi);
  curve.e_end = rng.uniform(lo, hi);
  curve.coeffs.resize(static_cast<size_t>(cfg.m));
  for (auto& a : curve.coeffs) a = rng.uniform(-amp, amp);
  return curve;
}

}  // namespace tlsm
