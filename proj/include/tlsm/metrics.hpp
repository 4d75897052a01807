#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tlsm {

// compensated (Kahan) accumulator
struct KahanSum {
  double sum = 0.0;
  double c = 0.0;

  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

// Per-cell moment accumulator for the self-normalized estimators. Blocks are
// accumulated independently and merged in a fixed order, so results do not
// depend on worker count or scheduling.
struct CellAccum {
  KahanSum w;      // sum of weights
  KahanSum w2;     // sum of squared weights
  KahanSum wi;     // sum of w * indicator(final_c2sq >= 0.5)
  KahanSum w2i;    // sum of w^2 * indicator
  KahanSum wd;     // sum of w * dev2
  KahanSum w2d;    // sum of w^2 * dev2
  KahanSum w2d2;   // sum of w^2 * dev2^2
  int64_t n = 0;
  int64_t underflows = 0;

  void add(double weight, bool transitioned, double dev2);
  void merge(const CellAccum& other);
};

struct EnsembleMetrics {
  double softness = 0.0;
  double softness_se = 0.0;
  double deviation = 0.0;      // in units of delta_e
  double deviation_se = 0.0;
  double reliability = 0.0;    // exactly 1/deviation
  double reliability_se = 0.0;
  double ess = 0.0;            // (sum w)^2 / sum w^2
  double weight_sum = 0.0;
  int64_t n = 0;
  int64_t underflows = 0;
};

// finalize the ratio estimates with linearized standard errors; throws
// std::runtime_error on an empty ensemble or all-zero weights
EnsembleMetrics finalize_metrics(const CellAccum& acc);

// generic self-normalized weighted mean sum(w*f)/sum(w) with its linearized
// standard error; compensated summation in a fixed pass order
struct WeightedEstimate {
  double mean = 0.0;
  double se = 0.0;
};
WeightedEstimate weighted_mean(std::span<const double> weights,
                               std::span<const double> f);

// Time average of the squared mismatch between the band-rescaled curve and
// the recorded |c2|^2 series: mean over [0, T] of
// ((curve - e1)/delta_e - c2sq)^2, trapezoid rule on the uniform recording
// grid. `curve_values` are the readout curve sampled on that grid.
double deviation_time_avg(std::span<const double> curve_values,
                          std::span<const double> c2sq, double e1,
                          double delta_e);

}  // namespace tlsm
