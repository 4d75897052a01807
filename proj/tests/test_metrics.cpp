#include <cmath>
#include <vector>
#include <stdexcept>

#include "doctest.h"
#include "tlsm/metrics.hpp"
#include "tlsm/rng.hpp"

using namespace tlsm;

namespace {

struct Synthetic {
  std::vector<double> w, f, dev2;
};

Synthetic make_synthetic(int n, uint64_t seed) {
  Synthetic s;
  SplitMix64 rng(seed);
  for (int i = 0; i < n; ++i) {
    s.w.push_back(rng.uniform(0.05, 2.0));
    s.f.push_back(rng.next_double() < 0.6 ? 1.0 : 0.0);
    s.dev2.push_back(rng.uniform(0.0, 0.2));
  }
  return s;
}

CellAccum fill(const Synthetic& s, double scale = 1.0) {
  CellAccum acc;
  for (size_t i = 0; i < s.w.size(); ++i)
    acc.add(s.w[i] * scale, s.f[i] != 0.0, s.dev2[i]);
  return acc;
}

}  // namespace

TEST_CASE("compensated summation keeps tiny terms a naive sum drops") {
  KahanSum k;
  k.add(1.0);
  for (int i = 0; i < 1000; ++i) k.add(1e-16);  // each add rounds away naively
  CHECK(k.value() == doctest::Approx(1.0 + 1e-13).epsilon(1e-15));
}

TEST_CASE("estimates are invariant under weight rescaling") {
  const Synthetic s = make_synthetic(500, 8);
  const EnsembleMetrics base = finalize_metrics(fill(s));
  // powers of two rescale every sum exactly: bitwise identical estimates
  const EnsembleMetrics p2 = finalize_metrics(fill(s, 1024.0));
  CHECK(p2.softness == base.softness);
  CHECK(p2.deviation == base.deviation);
  CHECK(p2.softness_se == base.softness_se);
  CHECK(p2.ess == base.ess);
  // non-dyadic factors agree to rounding
  const EnsembleMetrics p3 = finalize_metrics(fill(s, 3.0));
  CHECK(p3.softness == doctest::Approx(base.softness).epsilon(1e-13));
  CHECK(p3.deviation == doctest::Approx(base.deviation).epsilon(1e-13));
  CHECK(p3.ess == doctest::Approx(base.ess).epsilon(1e-13));
}

TEST_CASE("moment-sum estimates match a direct two-pass computation") {
  const Synthetic s = make_synthetic(2000, 21);
  const EnsembleMetrics m = finalize_metrics(fill(s));
  const WeightedEstimate ws = weighted_mean(s.w, s.f);
  CHECK(m.softness == doctest::Approx(ws.mean).epsilon(1e-13));
  CHECK(m.softness_se == doctest::Approx(ws.se).epsilon(1e-11));
  const WeightedEstimate wd = weighted_mean(s.w, s.dev2);
  CHECK(m.deviation * m.deviation ==
        doctest::Approx(wd.mean).epsilon(1e-12));
  CHECK(2.0 * m.deviation * m.deviation_se ==
        doctest::Approx(wd.se).epsilon(1e-10));
}

TEST_CASE("unanimous transitions give softness exactly one") {
  CellAccum acc;
  SplitMix64 rng(5);
  for (int i = 0; i < 300; ++i) acc.add(rng.uniform(0.1, 3.0), true, 0.01);
  CHECK(finalize_metrics(acc).softness == 1.0);
}

TEST_CASE("zero mismatch everywhere gives zero deviation") {
  CellAccum acc;
  for (int i = 0; i < 100; ++i) acc.add(1.0, i % 2 == 0, 0.0);
  const EnsembleMetrics m = finalize_metrics(acc);
  CHECK(m.deviation == 0.0);
  CHECK(m.deviation_se == 0.0);
  CHECK(std::isinf(m.reliability));
}

TEST_CASE("reliability is the exact reciprocal of deviation") {
  const EnsembleMetrics m = finalize_metrics(fill(make_synthetic(400, 3)));
  CHECK(m.reliability == 1.0 / m.deviation);
  CHECK(m.reliability_se ==
        doctest::Approx(m.deviation_se / (m.deviation * m.deviation))
            .epsilon(1e-15));
}

TEST_CASE("effective sample size: n for flat weights, below n otherwise") {
  CellAccum flat;
  for (int i = 0; i < 250; ++i) flat.add(0.7, i % 3 == 0, 0.1);
  CHECK(finalize_metrics(flat).ess == doctest::Approx(250.0).epsilon(1e-9));
  const EnsembleMetrics skew = finalize_metrics(fill(make_synthetic(250, 17)));
  CHECK(skew.ess < 250.0);
  CHECK(skew.ess > 1.0);
}

TEST_CASE("block merge reproduces the block totals in order") {
  const Synthetic s = make_synthetic(1024, 33);
  CellAccum blocks[4];
  for (size_t i = 0; i < s.w.size(); ++i)
    blocks[i / 256].add(s.w[i], s.f[i] != 0.0, s.dev2[i]);
  CellAccum merged_a, merged_b;
  for (int b = 0; b < 4; ++b) merged_a.merge(blocks[b]);
  for (int b = 0; b < 4; ++b) merged_b.merge(blocks[b]);
  const EnsembleMetrics a = finalize_metrics(merged_a);
  const EnsembleMetrics b = finalize_metrics(merged_b);
  CHECK(a.softness == b.softness);
  CHECK(a.deviation == b.deviation);
  CHECK(a.n == 1024);
}

TEST_CASE("degenerate ensembles are rejected") {
  CellAccum empty;
  CHECK_THROWS_AS((void)finalize_metrics(empty), std::runtime_error);
  CellAccum zeros;
  for (int i = 0; i < 10; ++i) zeros.add(0.0, false, 0.0);
  CHECK_THROWS_AS((void)finalize_metrics(zeros), std::runtime_error);
}

TEST_CASE("standard errors shrink like 1/sqrt(n)") {
  const EnsembleMetrics small = finalize_metrics(fill(make_synthetic(500, 42)));
  const EnsembleMetrics big =
      finalize_metrics(fill(make_synthetic(50000, 42)));
  CHECK(big.softness_se < small.softness_se / 5.0);
  CHECK(big.deviation_se < small.deviation_se / 5.0);
}

TEST_CASE("time-averaged mismatch: constant offset and exact tracking") {
  const int nr = 1025;
  std::vector<double> curve(nr), c2(nr, 0.0);
  // flat curve 0.3 above the lower level, flat population at zero
  for (int i = 0; i < nr; ++i) curve[i] = 0.3;
  CHECK(deviation_time_avg(curve, c2, 0.0, 1.0) ==
        doctest::Approx(0.09).epsilon(1e-12));
  // curve that the population tracks exactly
  for (int i = 0; i < nr; ++i) {
    curve[i] = 0.25 + 0.5 * i / (nr - 1.0);
    c2[i] = curve[i];
  }
  CHECK(deviation_time_avg(curve, c2, 0.0, 1.0) == 0.0);
  // linear ramp against zero population: trapezoid of x^2 on [0, 1]
  for (int i = 0; i < nr; ++i) {
    curve[i] = i / (nr - 1.0);
    c2[i] = 0.0;
  }
  CHECK(deviation_time_avg(curve, c2, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-5));
  // rescaling energies with the band leaves the mismatch unchanged
  std::vector<double> curve2(nr);
  for (int i = 0; i < nr; ++i) curve2[i] = 2.0 * curve[i] + 1.0;
  CHECK(deviation_time_avg(curve2, c2, 1.0, 2.0) ==
        doctest::Approx(deviation_time_avg(curve, c2, 0.0, 1.0))
            .epsilon(1e-13));
}
