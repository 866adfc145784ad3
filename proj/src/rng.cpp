#include "dephasim/rng.hpp"

#include <cmath>
#include <mutex>

#include "dephasim/numerics.hpp"

namespace dephasim {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& c, std::uint32_t k0, std::uint32_t k1) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  c[0] = hi1 ^ c[1] ^ k0;
  c[1] = lo1;
  c[2] = hi0 ^ c[3] ^ k1;
  c[3] = lo0;
}

// ---------------------------------------------------------------------------
// Ziggurat tables for the standard normal (256 layers).
//
// Layers are equal-area regions under f(x) = exp(-x^2/2): X[1] = r is the
// rightmost abscissa, X[i] decreases to X[256] = 0, and X[0] = v/f(r) is the
// pseudo-width of the base strip (rectangle [0,r] plus the tail beyond r).
// The common area v and r are found by bisection on the closure condition
// f(X[255]) + v/X[255] = f(0) = 1, using the in-house erfc for the tail area.
// For 256 layers this reproduces the published r = 3.6541528853610088.

constexpr int kZigLayers = 256;

struct ZigTables {
  double x[kZigLayers + 1];
  double f[kZigLayers + 1];
  double ratio[kZigLayers];  // x[i+1] / x[i]
  double r;
  double v;
};

double zig_tail_area(double r) { return std::sqrt(M_PI / 2.0) * dephasim::erfc(r / std::sqrt(2.0)); }

// Walks the layer recurrence for a trial r; returns the closure residual
// f(X[255]) + v/X[255] - 1 (positive when r is too small) and fills xs.
double zig_residual(double r, double* xs) {
  const double fr = std::exp(-0.5 * r * r);
  const double v = r * fr + zig_tail_area(r);
  double x = r;
  double fx = fr;
  xs[1] = r;
  for (int i = 2; i <= kZigLayers - 1; ++i) {
    fx += v / x;
    if (fx >= 1.0) {
      for (int j = i; j <= kZigLayers; ++j) xs[j] = 0.0;
      return 1.0;  // collapsed early: r too small
    }
    x = std::sqrt(-2.0 * std::log(fx));
    xs[i] = x;
  }
  xs[kZigLayers] = 0.0;
  return fx + v / x - 1.0;
}

const ZigTables& zig_tables() {
  static ZigTables tables;
  static std::once_flag once;
  std::call_once(once, [] {
    double lo = 3.0, hi = 4.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (zig_residual(mid, tables.x) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    tables.r = 0.5 * (lo + hi);
    zig_residual(tables.r, tables.x);
    const double fr = std::exp(-0.5 * tables.r * tables.r);
    tables.v = tables.r * fr + zig_tail_area(tables.r);
    tables.x[0] = tables.v / fr;
    for (int i = 0; i <= kZigLayers; ++i) tables.f[i] = std::exp(-0.5 * tables.x[i] * tables.x[i]);
    for (int i = 0; i < kZigLayers; ++i) tables.ratio[i] = tables.x[i + 1] / tables.x[i];
  });
  return tables;
}

}  // namespace

RandomStream::RandomStream(SeedSpec seed)
    : key01_(static_cast<std::uint32_t>(seed.master_seed)),
      key23_(static_cast<std::uint32_t>(seed.master_seed >> 32)),
      stream_(seed.stream_index) {}

std::array<std::uint32_t, 4> RandomStream::block(std::uint64_t index) const {
  std::array<std::uint32_t, 4> c = {
      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
      static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  std::uint32_t k0 = key01_, k1 = key23_;
  for (int round = 0; round < 10; ++round) {
    philox_round(c, k0, k1);
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return c;
}

std::uint64_t RandomStream::next_u64() {
  if (buffer_pos_ >= 3) {
    buffer_ = block(block_index_++);
    buffer_pos_ = 0;
  }
  const std::uint64_t lo = buffer_[buffer_pos_];
  const std::uint64_t hi = buffer_[buffer_pos_ + 1];
  buffer_pos_ += 2;
  return (hi << 32) | lo;
}

double RandomStream::uniform01() {
  // 53-bit grid, offset half a step: strictly inside (0, 1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() {
  const ZigTables& z = zig_tables();
  for (;;) {
    const std::uint64_t bits = next_u64();
    const int layer = static_cast<int>(bits & 0xFF);
    const double sign = (bits & 0x100) ? -1.0 : 1.0;
    const double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;

    if (u < z.ratio[layer]) return sign * u * z.x[layer];

    if (layer == 0) {
      // Marsaglia tail method for |x| > r.
      for (;;) {
        const double ex = -std::log(uniform01()) / z.r;
        const double ey = -std::log(uniform01());
        if (2.0 * ey > ex * ex) return sign * (z.r + ex);
      }
    }

    const double xv = u * z.x[layer];
    const double fy = z.f[layer] + uniform01() * (z.f[layer + 1] - z.f[layer]);
    if (fy < std::exp(-0.5 * xv * xv)) return sign * xv;
  }
}

void RandomStream::fill_normal(double* out, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) out[i] = normal();
}

}  // namespace dephasim
