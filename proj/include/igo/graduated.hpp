#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "igo/objectives.hpp"
#include "igo/optimizers.hpp"

namespace igo {

enum class PlanMode { Explicit, Implicit };

// The three ways of realizing the delta ladder through SGD hyperparameters,
// plus the constant baseline. All satisfy kappa / sqrt(lambda) = gamma except
// Constant (kappa = lambda = 1), which holds delta fixed.
enum class MethodPreset { Constant, LrDecay, BatchGrowth, Mixed };
const char* preset_name(MethodPreset p);
MethodPreset preset_from_name(const std::string& name);

// (kappa, lambda) pair for a preset at a given gamma. Mixed uses the fixed
// pair (sqrt(3)/2, 1.5), which is only consistent with gamma = 1/sqrt(2).
std::pair<double, double> preset_multipliers(MethodPreset p, double gamma);

// sigma_m as a function of the phase index (1-based) and that phase's delta.
using SigmaSchedule = std::function<double(int m, double delta)>;

SigmaSchedule constant_sigma(double sigma);

// Strong-convexity modulus of an analytic smoothed family near its
// minimizer: min of the numerical second derivative over a ball around
// x_star, shrinking the ball from 3*delta until the minimum is positive.
double measure_sigma(const SmoothedFamily& fam, double delta, double x_star);
SigmaSchedule measured_sigma(const SmoothedFamily& fam, double x_star = 0.0);

struct PlanPhase {
  double delta = 0.0;
  double sigma = 0.0;
  double eps = 0.0;    // per-phase target sigma_m delta_m^2 / 2
  double H = 0.0;      // convergence constant of the inner GD bound
  double eta = 0.0;
  int batch = 1;
  long iters = 0;      // T_m = ceil(H_m / eps_m)
  double kappa = 1.0;  // multipliers applied at the boundary after this phase
  double lambda = 1.0;
};

struct PlanParams {
  double eps = 0.1;     // target accuracy, in (0, 1)
  double gamma = 0.70710678118654752440;
  double eta1 = 0.1;
  int b1 = 1;
  double C = 0.0;       // gradient-noise scale (implicit mode)
  double delta1 = 0.0;  // explicit mode; implicit mode derives eta1 * C / sqrt(b1)
  double kappa = 1.0;
  double lambda = 1.0;
  SigmaSchedule sigma;
  double lipschitz_f = 0.0;
  double lipschitz_g = 0.0;
  PlanMode mode = PlanMode::Explicit;
  // Explicit mode only: clamp each eta_m to 0.9 * min{1/sigma_m, 2/L_g}
  // instead of following the kappa ladder blindly.
  bool cap_eta = false;
};

struct GraduatedPlan {
  double gamma = 0.0;
  double alpha0 = 0.0;
  double eps_target = 0.0;
  double C = 0.0;
  int M = 0;  // phases 1..M+1 are stored; phase M+1 repeats phase M
  PlanMode mode = PlanMode::Explicit;
  std::vector<PlanPhase> phases;

  long total_iters() const;
  Schedule schedule() const;     // implicit-mode phases as an SGD schedule
  std::string table() const;     // human-readable summary, one line per phase
};

// Algorithm parameters -> full phase ladder. Throws std::invalid_argument on
// gamma outside [0.5, 1), eps outside (0, 1), eta1 at or above the stability
// limit, alpha0 * eps >= 1 (zero-phase plan), or an inconsistent
// kappa/sqrt(lambda) in implicit mode.
GraduatedPlan build_plan(const PlanParams& p);

struct GraduatedResult {
  double x_final = 0.0;
  std::vector<double> phase_inputs;  // x_m entering phase m, m = 1..M+1
  std::vector<double> phase_values;  // smoothed value at each phase end
  long steps_executed = 0;           // actual inner steps (fixed points cut runs short)
  long steps_nominal = 0;            // sum of T_m
};

// Graduated descent on an analytic smoothed family: phase m runs GD on
// f-hat_{delta_m}; each phase seeds the next. The inner loop stops early
// once an iterate maps to itself exactly (the remaining steps would repeat
// it bit-for-bit), so steps_executed <= steps_nominal with identical output.
GraduatedResult run_explicit(const GraduatedPlan& plan, const SmoothedFamily& fam, double x1);

// Same ladder with SGD realizing the smoothing implicitly. fs.spread must
// match the plan's C; every batch must fit within fs.n.
struct ImplicitResult {
  RunTrace trace;
  std::vector<double> phase_inputs;
};
ImplicitResult run_implicit(const GraduatedPlan& plan, const FiniteSumObjective& fs, double x1,
                            std::uint64_t seed, long record_stride = 1);

// Minimizer of f-hat_delta on [lo, hi]: dense grid scan plus bisection on
// the derivative around the best cell.
double find_smoothed_minimizer(const SmoothedFamily& fam, double delta, double lo, double hi);

struct ContainmentReport {
  int checked = 0;
  int violations = 0;        // against the 3 delta_m bound
  int tight_violations = 0;  // against the (2/gamma - 1) delta_m bound
  double worst_ratio = 0.0;  // max ||x_m - x_star|| / (3 delta_m)
  bool ok = true;
};

// Checks ||x_m - x_star_{delta_m}|| < 3 delta_m at every phase entry, plus
// the tighter (2/gamma - 1) delta_m proof bound.
ContainmentReport check_basin_containment(const std::vector<double>& phase_inputs,
                                          const GraduatedPlan& plan, const SmoothedFamily& fam,
                                          double lo, double hi);

}  // namespace igo
