#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "igo/objectives.hpp"

namespace igo {

struct Phase {
  double eta = 0.1;
  int batch = 1;
  long iters = 1;
  double delta = 0.0;  // recorded degree of smoothing for the phase
};

struct Schedule {
  std::vector<Phase> phases;
  void validate(int n_components) const;
};

// Per-iteration record of one optimization run. With record_stride > 1 only
// every stride-th iterate is kept (plus the final one); summary fields are
// exact regardless.
struct RunTrace {
  std::vector<std::vector<double>> iterates;
  std::vector<double> values;
  std::vector<double> grad_norms;
  std::vector<int> phase_index;
  std::vector<double> delta;
  std::vector<long> t;  // iteration number of each recorded row
  std::vector<double> final_x;
  double final_value = 0.0;
  long total_iters = 0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::string msg, RunTrace prefix)
      : std::runtime_error(std::move(msg)), trace_prefix(std::move(prefix)) {}
  RunTrace trace_prefix;
};

// |f| or ||x|| beyond this is treated as divergence.
inline constexpr double kDivergenceLimit = 1e12;

using ValueFn = std::function<double(std::span<const double>)>;
using GradFn = std::function<std::vector<double>(std::span<const double>)>;

RunTrace gd_run(const ValueFn& value, const GradFn& grad, std::span<const double> x0, double eta,
                long iters, long record_stride = 1);

// Mini-batch SGD with a per-phase constant (eta, batch) schedule; the
// recorded delta per step is eta_m * C / sqrt(b_m).
RunTrace sgd_run(const FiniteSumObjective& fs, std::span<const double> x0,
                 const Schedule& schedule, std::uint64_t seed, long record_stride = 1);

inline double degree_of_smoothing(double eta, double b, double C) {
  if (!(eta > 0.0) || !(b >= 1.0) || C < 0.0)
    throw std::invalid_argument("degree_of_smoothing: need eta > 0, b >= 1, C >= 0");
  return eta * C / std::sqrt(b);
}

struct EquivalenceReport {
  std::vector<double> gd_path;       // 1-D GD iterate per step
  std::vector<double> sgd_mean;      // mean over runs of the SGD iterate
  std::vector<double> tolerance;     // 4 * std / sqrt(n_runs) per step
  std::vector<double> deviation;     // |sgd_mean - gd_path|
  int steps_within = 0;
  bool all_within = false;
  double delta = 0.0;
};

// Mean-over-seeds comparison of SGD on f against GD on f (= GD on the
// smoothed surrogate in expectation), 1-D objectives.
EquivalenceReport sgd_gd_equivalence(const Objective& base, double spread, double eta, int b,
                                     int n_runs, int steps, std::uint64_t seed);

}  // namespace igo
