#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "dephasim/rng.hpp"
#include "oracles.hpp"

using dephasim::RandomStream;
using dephasim::SeedSpec;

TEST_CASE("identical SeedSpec replays identical output") {
  RandomStream a({0x1234abcd5678ef01ull, 7});
  RandomStream b({0x1234abcd5678ef01ull, 7});
  for (int i = 0; i < 200; ++i) CHECK(a.next_u64() == b.next_u64());

  RandomStream c({0x1234abcd5678ef01ull, 7});
  RandomStream d({0x1234abcd5678ef01ull, 7});
  for (int i = 0; i < 200; ++i) CHECK(c.normal() == d.normal());
}

TEST_CASE("different stream_index gives a different sequence") {
  RandomStream a({42, 0});
  RandomStream b({42, 1});
  int same = 0;
  for (int i = 0; i < 64; ++i) same += a.next_u64() == b.next_u64();
  CHECK(same == 0);
}

TEST_CASE("philox4x32-10 known-answer vector") {
  // Reference vector for counter = 0, key = 0 (Salmon et al. test vectors):
  // outputs 6627e8d5 e169c58d bc57ac4c 9b00dbd8.
  RandomStream s({0, 0});
  CHECK(s.next_u64() == ((0xe169c58dull << 32) | 0x6627e8d5ull));
  CHECK(s.next_u64() == ((0x9b00dbd8ull << 32) | 0xbc57ac4cull));
}

TEST_CASE("uniform01 lies strictly inside (0,1) with mean 1/2") {
  RandomStream s({99, 0});
  const int n = 1000000;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform01();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  const double mean = sum / n;
  const double se = 1.0 / std::sqrt(12.0 * n);
  CHECK(std::abs(mean - 0.5) < 4.0 * se);
}

TEST_CASE("normal sampler: moments match the standard normal") {
  RandomStream s({2024, 0});
  const int n = 2000000;
  double m1 = 0, m2 = 0, m3 = 0, m4 = 0, m6 = 0;
  double max_abs = 0;
  for (int i = 0; i < n; ++i) {
    const double x = s.normal();
    m1 += x;
    m2 += x * x;
    m3 += x * x * x;
    m4 += x * x * x * x;
    m6 += x * x * x * x * x * x;
    max_abs = std::max(max_abs, std::abs(x));
  }
  m1 /= n;
  m2 /= n;
  m3 /= n;
  m4 /= n;
  m6 /= n;
  const double rn = std::sqrt(static_cast<double>(n));
  CHECK(std::abs(m1) < 4.0 / rn);                          // Var = 1
  CHECK(std::abs(m2 - 1.0) < 4.0 * std::sqrt(2.0) / rn);   // Var[x^2] = 2
  CHECK(std::abs(m3) < 4.0 * std::sqrt(15.0) / rn);        // Var[x^3] = 15
  CHECK(std::abs(m4 - 3.0) < 4.0 * std::sqrt(96.0) / rn);  // Var[x^4] = 96
  CHECK(std::abs(m6 - 15.0) < 4.0 * std::sqrt(10395.0 - 225.0) / rn);
  CHECK(max_abs > 4.0);  // the tail is alive
  CHECK(max_abs < 6.5);  // ... and not broken
}

TEST_CASE("normal sampler: empirical CDF matches Phi") {
  RandomStream s({7777, 3});
  const int n = 2000000;
  const std::vector<double> zs = {-3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0};
  std::vector<int> counts(zs.size(), 0);
  for (int i = 0; i < n; ++i) {
    const double x = s.normal();
    for (std::size_t k = 0; k < zs.size(); ++k)
      if (x <= zs[k]) ++counts[k];
  }
  for (std::size_t k = 0; k < zs.size(); ++k) {
    const double p = oracles::normal_cdf(zs[k]);
    const double se = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::abs(static_cast<double>(counts[k]) / n - p) < 4.5 * se);
  }
}

TEST_CASE("streams are statistically independent") {
  const int n = 100000;
  RandomStream a({5150, 10});
  RandomStream b({5150, 11});
  double sab = 0, sa = 0, sb = 0, saa = 0, sbb = 0;
  for (int i = 0; i < n; ++i) {
    const double x = a.normal(), y = b.normal();
    sab += x * y;
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double corr = cov / std::sqrt((saa / n - (sa / n) * (sa / n)) *
                                      (sbb / n - (sb / n) * (sb / n)));
  CHECK(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("fill_normal equals repeated normal()") {
  RandomStream a({31, 5});
  RandomStream b({31, 5});
  double buf[257];
  a.fill_normal(buf, 257);
  for (int i = 0; i < 257; ++i) CHECK(buf[i] == b.normal());
}
