#include "tlsm/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace tlsm {

void CellAccum::add(double weight, bool transitioned, double dev2) {
  const double ind = transitioned ? 1.0 : 0.0;
  w.add(weight);
  w2.add(weight * weight);
  wi.add(weight * ind);
  w2i.add(weight * weight * ind);
  wd.add(weight * dev2);
  w2d.add(weight * weight * dev2);
  w2d2.add(weight * weight * dev2 * dev2);
  n += 1;
}

void CellAccum::merge(const CellAccum& other) {
  w.add(other.w.value());
  w2.add(other.w2.value());
  wi.add(other.wi.value());
  w2i.add(other.w2i.value());
  wd.add(other.wd.value());
  w2d.add(other.w2d.value());
  w2d2.add(other.w2d2.value());
  n += other.n;
  underflows += other.underflows;
}

EnsembleMetrics finalize_metrics(const CellAccum& acc) {
  if (acc.n == 0) throw std::runtime_error("metrics: no trajectories");
  const double W = acc.w.value();
  if (!(W > 0.0)) throw std::runtime_error("metrics: total weight is zero");
  const double w2 = acc.w2.value();

  EnsembleMetrics m;
  m.n = acc.n;
  m.underflows = acc.underflows;
  m.weight_sum = W;
  m.ess = W * W / w2;

  // self-normalized ratio estimators; the indicator satisfies f^2 = f
  const double s = acc.wi.value() / W;
  double var_s = (1.0 - 2.0 * s) * acc.w2i.value() + s * s * w2;
  if (var_s < 0.0) var_s = 0.0;  // rounding guard
  m.softness = s;
  m.softness_se = std::sqrt(var_s) / W;

  const double d2 = acc.wd.value() / W;
  double var_d2 = acc.w2d2.value() - 2.0 * d2 * acc.w2d.value() + d2 * d2 * w2;
  if (var_d2 < 0.0) var_d2 = 0.0;
  const double d2_se = std::sqrt(var_d2) / W;
  const double d = std::sqrt(d2);
  m.deviation = d;
  m.deviation_se = d > 0.0 ? d2_se / (2.0 * d) : 0.0;
  m.reliability = 1.0 / d;  // +inf for an exactly tracking ensemble
  m.reliability_se = d > 0.0 ? m.deviation_se / (d * d) : 0.0;
  return m;
}

WeightedEstimate weighted_mean(std::span<const double> weights,
                               std::span<const double> f) {
  if (weights.size() != f.size())
    throw std::invalid_argument("weighted_mean: size mismatch");
  if (weights.empty()) throw std::invalid_argument("weighted_mean: empty");
  KahanSum sw, swf;
  for (size_t i = 0; i < weights.size(); ++i) {
    sw.add(weights[i]);
    swf.add(weights[i] * f[i]);
  }
  const double W = sw.value();
  if (!(W > 0.0)) throw std::runtime_error("weighted_mean: zero total weight");
  const double mean = swf.value() / W;
  KahanSum dev;
  for (size_t i = 0; i < weights.size(); ++i) {
    const double r = f[i] - mean;
    dev.add(weights[i] * weights[i] * r * r);
  }
  return {mean, std::sqrt(dev.value()) / W};
}

double deviation_time_avg(std::span<const double> curve_values,
                          std::span<const double> c2sq, double e1,
                          double delta_e) {
  if (curve_values.size() != c2sq.size() || curve_values.size() < 2)
    throw std::invalid_argument("deviation_time_avg: bad series");
  const size_t nseg = curve_values.size() - 1;
  KahanSum s;
  for (size_t i = 0; i <= nseg; ++i) {
    const double g = (curve_values[i] - e1) / delta_e - c2sq[i];
    const double g2 = g * g;
    s.add(i == 0 || i == nseg ? 0.5 * g2 : g2);  // trapezoid rule
  }
  return s.value() / static_cast<double>(nseg);
}

}  // namespace tlsm
