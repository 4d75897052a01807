#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "tlsm/readout.hpp"

using namespace tlsm;
using std::numbers::pi;

namespace {
const PhysicsConfig kPhys = default_config();
}

TEST_CASE("sampling is reproducible and honors the draw order") {
  SamplerConfig cfg;
  SplitMix64 a(123), b(123);
  const ReadoutCurve c1 = sample_readout(a, cfg, kPhys);
  const ReadoutCurve c2 = sample_readout(b, cfg, kPhys);
  CHECK(c1.e_start == c2.e_start);
  CHECK(c1.e_end == c2.e_end);
  CHECK(c1.coeffs == c2.coeffs);

  // endpoints first, then the mode amplitudes low to high
  SplitMix64 manual(123);
  const double lo = kPhys.e1 - cfg.margin_fraction * kPhys.delta_e;
  const double hi = kPhys.e2 + cfg.margin_fraction * kPhys.delta_e;
  const double amp = cfg.amp_fraction * kPhys.delta_e;
  CHECK(c1.e_start == manual.uniform(lo, hi));
  CHECK(c1.e_end == manual.uniform(lo, hi));
  for (int k = 0; k < cfg.m; ++k)
    CHECK(c1.coeffs[k] == manual.uniform(-amp, amp));
}

TEST_CASE("draws stay inside the configured band") {
  SamplerConfig cfg;
  SplitMix64 rng(5);
  for (int i = 0; i < 10000; ++i) {
    const ReadoutCurve c = sample_readout(rng, cfg, kPhys);
    REQUIRE(c.e_start >= -0.5);
    REQUIRE(c.e_start <= 1.5);
    REQUIRE(c.e_end >= -0.5);
    REQUIRE(c.e_end <= 1.5);
    REQUIRE(c.coeffs.size() == 10);
    for (double a : c.coeffs) {
      REQUIRE(a >= -0.35);
      REQUIRE(a <= 0.35);
    }
  }
  SamplerConfig narrow;
  narrow.margin_fraction = 0.2;
  for (int i = 0; i < 1000; ++i) {
    const ReadoutCurve c = sample_readout(rng, narrow, kPhys);
    REQUIRE(c.e_start >= -0.2);
    REQUIRE(c.e_start <= 1.2);
  }
}

TEST_CASE("endpoint draws center on the band middle") {
  SamplerConfig cfg;
  SplitMix64 rng(11);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_readout(rng, cfg, kPhys).e_start;
  // band is U(-0.5, 1.5): mean 0.5, sd 2/sqrt(12)
  const double tol = 3.0 * (2.0 / std::sqrt(12.0)) / std::sqrt(n);
  CHECK(std::abs(sum / n - 0.5) < tol);
}

TEST_CASE("curve evaluation: endpoints come from the trend alone") {
  ReadoutCurve c;
  c.e_start = 0.8;
  c.e_end = -0.1;
  c.coeffs = {0.3, -0.2, 0.1, 0.05, 0.0, 0.0, 0.0, 0.0, 0.0, 0.25};
  c.t_total = kPhys.t_total;
  CHECK(c.eval(0.0) == 0.8);
  CHECK(c.eval(c.t_total) == doctest::Approx(-0.1).epsilon(1e-12));
  // interior value equals trend + series
  const double t = 1.234;
  double expect = c.trend(t);
  for (int k = 0; k < 10; ++k)
    expect += c.coeffs[k] * std::sin((k + 1) * pi * t / c.t_total);
  CHECK(c.eval(t) == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("mode damping factors") {
  CHECK(smooth_factor(3) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(0.3 * smooth_factor(3) == doctest::Approx(0.110364).epsilon(1e-5));
  CHECK(0.1 * smooth_factor(9) == doctest::Approx(1.2341e-5).epsilon(1e-4));

  ReadoutCurve c;
  c.e_start = 0.2;
  c.e_end = 0.9;
  c.coeffs.assign(10, 0.3);
  c.t_total = kPhys.t_total;
  const ReadoutCurve s = smooth_readout(c);
  CHECK(s.e_start == c.e_start);
  CHECK(s.e_end == c.e_end);
  for (int k = 0; k < 10; ++k)
    CHECK(s.coeffs[k] ==
          doctest::Approx(0.3 * std::exp(-((k + 1) / 3.0) * ((k + 1) / 3.0)))
              .epsilon(1e-15));
  const double t = 2.5;
  CHECK(c.eval_smoothed(t) == doctest::Approx(s.eval(t)).epsilon(1e-14));
}

TEST_CASE("sine modes are orthogonal under the recording-grid trapezoid") {
  const int n = 1024;  // 1025 recorded points
  const double T = kPhys.t_total;
  for (int j = 1; j <= 10; ++j)
    for (int k = j; k <= 10; ++k) {
      double acc = 0.0;
      for (int r = 0; r <= n; ++r) {
        const double t = T * r / n;
        const double f = std::sin(j * pi * t / T) * std::sin(k * pi * t / T);
        acc += (r == 0 || r == n) ? 0.5 * f : f;
      }
      acc *= T / n;
      if (j == k)
        CHECK(acc == doctest::Approx(T / 2.0).epsilon(1e-9));
      else
        CHECK(std::abs(acc) < 1e-9 * T);
    }
}

TEST_CASE("sampler validation") {
  SamplerConfig cfg;
  CHECK(cfg.validate().empty());
  cfg.m = 0;
  CHECK(!cfg.validate().empty());
  cfg = SamplerConfig{};
  cfg.amp_fraction = -0.1;
  CHECK(!cfg.validate().empty());
}
