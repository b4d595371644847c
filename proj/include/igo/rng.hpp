#pragma once

#include <cmath>
#include <cstdint>

namespace igo {

// Counter-style generator built on splitmix64. Every stochastic operation in
// the library takes an explicit seed, so runs are reproducible bit-for-bit
// across platforms; none of the std distributions are used because their
// output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // in [0, 1)
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    // Box-Muller; reject u1 == 0 so log stays finite.
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
  }

  double exponential(double rate) {
    double u = 0.0;
    while (u == 0.0) u = uniform01();
    return -std::log(u) / rate;
  }

  double rayleigh(double sigma) {
    double u = 0.0;
    while (u == 0.0) u = uniform01();
    return sigma * std::sqrt(-2.0 * std::log(u));
  }

  double cauchy() { return std::tan(M_PI * (uniform01() - 0.5)); }

  // Pareto with minimum 1, via inverse CDF.
  double pareto(double shape) {
    double u = 0.0;
    while (u == 0.0) u = uniform01();
    return std::pow(u, -1.0 / shape);
  }

  // Standard Levy (stable alpha = 1/2): 1/Z^2 for Z standard normal.
  double levy() {
    double z = 0.0;
    while (z == 0.0) z = normal();
    return 1.0 / (z * z);
  }

  // Derive an independent stream; used to hand disjoint seeds to sub-tasks.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    Rng r(seed ^ (0x6a09e667f3bcc909ULL + stream * 0x3c6ef372fe94f82bULL));
    return r.next_u64();
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace igo
