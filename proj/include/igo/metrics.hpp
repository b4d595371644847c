#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "igo/objectives.hpp"
#include "igo/optimizers.hpp"

namespace igo {

// Mean squared deviation of minibatch gradients from the full gradient at x,
// over n_draws independent draws. For the linear-perturbation finite sum
// this estimates exactly spread^2 / b.
double empirical_grad_variance(const FiniteSumObjective& fs, std::span<const double> x, int b,
                               int n_draws, std::uint64_t seed);

struct VarianceEstimate {
  double C2_hat = 0.0;
  int b_star = 0;
  double eps_threshold = 0.0;
  double eta = 0.0;
  // (batch, steps-to-threshold) per grid entry; steps < 0 means the cap hit
  std::vector<std::pair<int, long>> steps_per_batch;
};

// Variance-bound estimation: run SGD at each batch size until the running
// mean of ||grad f||^2 over the whole prefix drops to eps^2, pick the batch
// minimizing steps x batch (gradient evaluations), and report
// C2_hat = b_star eps^2 / eta. Throws if no batch reaches the threshold
// within iter_cap steps.
VarianceEstimate estimate_C2(const FiniteSumObjective& fs, double eta, double eps_threshold,
                             const std::vector<int>& batch_grid, std::span<const double> x0,
                             std::uint64_t seed, long iter_cap = 200000);

struct SharpnessQuery {
  std::vector<double> w;
  double rho = 0.1;
  std::vector<double> c;  // per-coordinate scaling, strictly positive
  double p = std::numeric_limits<double>::infinity();
};

enum class SharpnessMethod {
  Grid,               // d = 1: dense scan, effectively exact
  CornerEnum,         // p = inf, d <= 12: corners plus coordinate refinement
  SignGradientAscent  // any d: multi-restart projected ascent, a lower bound
};

// Worst-case increase max{f(w + delta) - f(w) : ||delta / c||_p <= rho}.
double adaptive_sharpness(const Objective& obj, const SharpnessQuery& q, SharpnessMethod method);

struct GapSeries {
  std::vector<long> T;
  std::vector<double> gap;    // running min of value - f_star
  std::vector<double> bound;  // H / T
  int violations = 0;
  bool ok = true;
};

// Running best-iterate suboptimality against the H/T bound, evaluated at the
// recorded trace points (T >= 1).
GapSeries convergence_gap(const RunTrace& trace, double f_star, double H);

struct SharpnessSweepRow {
  double eta;
  int batch;
  double C;
  double delta;
  double final_value;
  double sharpness;
  std::uint64_t seed;
};

// One SGD run per (eta, batch) cell; measures final raw-objective value and
// adaptive sharpness (1-D grid method) at the last iterate.
std::vector<SharpnessSweepRow> sharpness_sweep(const FiniteSumObjective& fs,
                                               const std::vector<double>& etas,
                                               const std::vector<int>& batches, long iters,
                                               double x0, double rho, std::uint64_t seed);

void write_sharpness_csv(const std::string& path, const std::vector<SharpnessSweepRow>& rows);

}  // namespace igo
