#ifndef RALLYSHAP_RANDOM_H_
#define RALLYSHAP_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string_view>

namespace rallyshap {

// SplitMix64 finalizer.
constexpr uint64_t Mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Combines stream coordinates into a single generator key. Order matters.
constexpr uint64_t DeriveKey(uint64_t a, uint64_t b) {
  return Mix64(Mix64(a) ^ (b + 0x9e3779b97f4a7c15ULL));
}
constexpr uint64_t DeriveKey(uint64_t a, uint64_t b, uint64_t c) {
  return DeriveKey(DeriveKey(a, b), c);
}

// FNV-1a; stable across platforms, unlike std::hash.
constexpr uint64_t HashString(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Counter-based generator: the n-th draw is Mix64(key + n * gamma), so a
// stream is fully determined by its key. All distribution transforms below
// are written out explicitly so that output is bit-identical on every
// platform (the <random> distributions are implementation-defined).
class StreamRng {
 public:
  explicit StreamRng(uint64_t key) : key_(key) {}

  uint64_t NextU64() {
    ++counter_;
    return Mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  // Uniform in [0, 1) with 53 bits of resolution.
  double Uniform() { return static_cast<double>(NextU64() >> 11) * 0x1.0p-53; }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n) by rejection; n > 0.
  uint64_t Below(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
      v = NextU64();
    } while (v >= limit);
    return v % n;
  }

  // Box-Muller, one draw per call (the partner value is discarded).
  double Normal() {
    double u1 = Uniform();
    while (u1 <= 0.0) u1 = Uniform();
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Marsaglia-Tsang; shape < 1 handled with the U^(1/shape) boost.
  double Gamma(double shape) {
    if (shape < 1.0) {
      const double u = Uniform();
      return Gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x;
      double v;
      do {
        x = Normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = Uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Inverse-CDF draw from a discrete distribution. Falls back to the last
  // index with positive mass when rounding leaves u above the running sum.
  int Categorical(std::span<const double> probs) {
    const double u = Uniform();
    double acc = 0.0;
    int last_positive = 0;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
      if (probs[i] > 0.0) last_positive = i;
      acc += probs[i];
      if (u < acc) return i;
    }
    return last_positive;
  }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace rallyshap

#endif  // RALLYSHAP_RANDOM_H_
