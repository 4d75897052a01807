#pragma once

#include <string>
#include <vector>

#include "tlsm/physics.hpp"
#include "tlsm/rng.hpp"

namespace tlsm {

// Candidate readout curve: straight-line trend plus a finite Fourier sine
// series, E(t) = g(t) + sum_k a_k sin(k*pi*t/T).
struct ReadoutCurve {
  double e_start = 0.0;        // E(0)
  double e_end = 0.0;          // E(T)
  std::vector<double> coeffs;  // a_k, k = 1..m
  double t_total = 0.0;

  double trend(double t) const {
    return e_start + (e_end - e_start) * (t / t_total);
  }

  // raw curve value
  double eval(double t) const;

  // value with coefficients damped by exp(-(k/3)^2)
  double eval_smoothed(double t) const;
};

struct SamplerConfig {
  int m = 10;                    // Fourier mode count
  double amp_fraction = 0.35;    // a_k ~ U(+-amp_fraction*delta_e)
  double margin_fraction = 0.5;  // endpoints ~ U([e1 - f*de, e2 + f*de])

  std::vector<std::string> validate() const;
};

// mode-k damping factor exp(-(k/3)^2)
double smooth_factor(int k);

// copy with a_k <- a_k * exp(-(k/3)^2); trend unchanged
ReadoutCurve smooth_readout(const ReadoutCurve& curve);

// draw order per curve: e_start, e_end, a_1..a_m (all uniform)
ReadoutCurve sample_readout(SplitMix64& rng, const SamplerConfig& cfg,
                            const PhysicsConfig& phys);

}  // namespace tlsm
