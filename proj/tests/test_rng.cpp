#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "tlsm/rng.hpp"

using namespace tlsm;

TEST_CASE("splitmix64 matches the published reference outputs") {
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xe220a8397b1dcdafull);
  CHECK(rng.next() == 0x6e789e6aa1b965f4ull);
  CHECK(rng.next() == 0x06c45d188009454full);
}

TEST_CASE("streams are reproducible and seed-sensitive") {
  SplitMix64 a(42), b(42), c(43);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 100; ++i) {
    const uint64_t x = a.next();
    all_equal = all_equal && x == b.next();
    any_diff = any_diff || x != c.next();
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("next_double lies in [0, 1) with the uniform mean") {
  SplitMix64 rng(7);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.next_double();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    sum += x;
  }
  // 3 sigma of the sample mean of U(0,1)
  CHECK(std::abs(sum / n - 0.5) < 3.0 * (1.0 / std::sqrt(12.0)) / std::sqrt(n));
}

TEST_CASE("uniform(lo, hi) respects its bounds") {
  SplitMix64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(-0.35, 0.35);
    REQUIRE(x >= -0.35);
    REQUIRE(x < 0.35);
  }
}

TEST_CASE("trajectory seeds are distinct and base-dependent") {
  std::vector<uint64_t> seeds;
  for (uint64_t i = 0; i < 10000; ++i) seeds.push_back(trajectory_seed(1, i));
  std::sort(seeds.begin(), seeds.end());
  CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
  CHECK(trajectory_seed(1, 5) != trajectory_seed(2, 5));
  // stable across builds: replaying an index must always find its curve
  CHECK(trajectory_seed(1, 0) == 0x910a2dec89025cc1ull);
  CHECK(trajectory_seed(1, 1) == 0xbeeb8da1658eec67ull);
}
