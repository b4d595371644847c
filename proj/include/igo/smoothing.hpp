#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "igo/noise.hpp"
#include "igo/objectives.hpp"

namespace igo {

// Monte Carlo estimate of a smoothed value or gradient coordinate, with a
// 95% normal-approximation confidence half-width.
struct SmoothedEstimate {
  double value = 0.0;                // f-hat estimate (or first grad coordinate)
  std::vector<double> gradient;      // filled by mc_smooth_grad
  std::size_t n_samples = 0;
  double ci_half_width = 0.0;        // 1.96 * sample_std / sqrt(n); max over coords for gradients
  double delta = 0.0;
  std::string dist;
  std::size_t nonfinite = 0;         // samples dropped as non-finite (heavy tails)
  bool unstable = false;             // >1% of samples non-finite
};

// Sample mean of f(x - delta * u_k) over a fresh noise panel. delta = 0
// returns f(x) exactly with zero CI. Non-finite samples are counted; the
// estimate is marked unstable (not an error) when they exceed 1%.
SmoothedEstimate mc_smooth_eval(const Objective& obj, std::span<const double> x, double delta,
                                const NoiseDistribution& dist, std::size_t n_samples,
                                std::uint64_t seed);

// Same noise panel convention; estimates grad f-hat(x) as the mean of
// grad f(x - delta * u_k).
SmoothedEstimate mc_smooth_grad(const Objective& obj, std::span<const double> x, double delta,
                                const NoiseDistribution& dist, std::size_t n_samples,
                                std::uint64_t seed);

// Variants that reuse a caller-supplied panel (common random numbers):
// comparative checks across x share one panel per seed to suppress MC noise.
SmoothedEstimate mc_smooth_eval_panel(const Objective& obj, std::span<const double> x,
                                      double delta, std::span<const double> panel,
                                      const std::string& dist_name);
SmoothedEstimate mc_smooth_grad_panel(const Objective& obj, std::span<const double> x,
                                      double delta, std::span<const double> panel,
                                      const std::string& dist_name);

struct BoundReport {
  bool ok = true;
  int checked = 0;
  int violations = 0;
  double max_ratio = 0.0;  // max |f-hat - f| / (delta * L_f)
};

// |f-hat_delta(x) - f(x)| <= delta * L_f + 4 CI on every grid point.
BoundReport check_error_bound(const Objective& obj, double delta, const NoiseDistribution& dist,
                              std::span<const double> grid, std::size_t n_samples,
                              std::uint64_t seed);

struct LipschitzReport {
  bool ok = true;
  int pairs = 0;
  int value_violations = 0;
  int grad_violations = 0;
  double max_value_ratio = 0.0;  // |f-hat(x)-f-hat(y)| / (L_f ||x-y||)
  double max_grad_ratio = 0.0;
};

// Smoothing inherits L_f and L_g: over random domain pairs, with common
// random numbers across the pair.
LipschitzReport check_lipschitz_inheritance(const Objective& obj, double delta,
                                            const NoiseDistribution& dist, int pair_count,
                                            std::size_t n_samples, std::uint64_t seed);

struct SweepRow {
  std::string objective;
  std::string dist;
  double delta;
  double x;
  double estimate;
  double ci;
  std::size_t n_samples;
  bool unstable;
};

// One estimate per (distribution, grid point), one shared panel per
// distribution. Rows come out in fixed (distribution, grid) order.
std::vector<SweepRow> smoothing_sweep(const Objective& obj, double delta,
                                      const std::vector<NoiseDistribution>& dists,
                                      std::span<const double> grid, std::size_t n_samples,
                                      std::uint64_t seed);

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

}  // namespace igo
