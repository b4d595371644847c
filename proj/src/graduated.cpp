#include "igo/graduated.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "igo/csv.hpp"

namespace igo {

const char* preset_name(MethodPreset p) {
  switch (p) {
    case MethodPreset::Constant: return "constant";
    case MethodPreset::LrDecay: return "lr-decay";
    case MethodPreset::BatchGrowth: return "batch-growth";
    case MethodPreset::Mixed: return "mixed";
  }
  throw std::invalid_argument("bad preset");
}

MethodPreset preset_from_name(const std::string& name) {
  if (name == "constant") return MethodPreset::Constant;
  if (name == "lr-decay") return MethodPreset::LrDecay;
  if (name == "batch-growth") return MethodPreset::BatchGrowth;
  if (name == "mixed") return MethodPreset::Mixed;
  throw std::invalid_argument("unknown method preset: " + name);
}

std::pair<double, double> preset_multipliers(MethodPreset p, double gamma) {
  switch (p) {
    case MethodPreset::Constant: return {1.0, 1.0};
    case MethodPreset::LrDecay: return {gamma, 1.0};
    case MethodPreset::BatchGrowth: return {1.0, 1.0 / (gamma * gamma)};
    case MethodPreset::Mixed: return {std::sqrt(3.0) / 2.0, 1.5};
  }
  throw std::invalid_argument("bad preset");
}

SigmaSchedule constant_sigma(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("constant_sigma: sigma must be > 0");
  return [sigma](int, double) { return sigma; };
}

double measure_sigma(const SmoothedFamily& fam, double delta, double x_star) {
  const double h = 1e-6;
  double r = 3.0 * delta;
  for (int shrink = 0; shrink < 60; ++shrink) {
    double lo_curv = std::numeric_limits<double>::infinity();
    const int n = 201;
    for (int i = 0; i < n; ++i) {
      const double x = x_star - r + 2.0 * r * i / (n - 1);
      const double c = (fam.deriv(x + h, delta) - fam.deriv(x - h, delta)) / (2.0 * h);
      lo_curv = std::min(lo_curv, c);
    }
    if (lo_curv > 0.0) return lo_curv;
    r *= 0.5;
  }
  throw std::runtime_error("measure_sigma: no positive-curvature ball found around x_star");
}

SigmaSchedule measured_sigma(const SmoothedFamily& fam, double x_star) {
  return [fam, x_star](int, double delta) { return measure_sigma(fam, delta, x_star); };
}

namespace {

double phase_H(double delta, double eta, double sigma, double lf, double lg) {
  return 9.0 * (1.0 - sigma * eta) * delta * delta / (2.0 * eta) +
         3.0 * lf * delta / (eta * (2.0 - lg * eta));
}

}  // namespace

GraduatedPlan build_plan(const PlanParams& p) {
  if (!(p.gamma >= 0.5) || !(p.gamma < 1.0))
    throw std::invalid_argument("build_plan: gamma must lie in [0.5, 1) (basin containment)");
  if (!(p.eps > 0.0) || !(p.eps < 1.0))
    throw std::invalid_argument("build_plan: eps must lie in (0, 1)");
  if (!p.sigma) throw std::invalid_argument("build_plan: sigma schedule required");
  if (!(p.lipschitz_f > 0.0) || !(p.lipschitz_g > 0.0))
    throw std::invalid_argument("build_plan: need positive L_f and L_g");

  double delta1 = p.delta1;
  if (p.mode == PlanMode::Implicit) {
    if (!(p.C > 0.0)) throw std::invalid_argument("build_plan: implicit mode needs C > 0");
    if (p.b1 < 1) throw std::invalid_argument("build_plan: b1 must be >= 1");
    if (std::fabs(p.kappa / std::sqrt(p.lambda) - p.gamma) > 1e-12)
      throw std::invalid_argument("build_plan: kappa / sqrt(lambda) must equal gamma");
    delta1 = p.eta1 * p.C / std::sqrt(static_cast<double>(p.b1));
  }
  if (!(delta1 > 0.0)) throw std::invalid_argument("build_plan: delta1 must be > 0");

  const double sigma1 = p.sigma(1, delta1);
  if (!(sigma1 > 0.0)) throw std::invalid_argument("build_plan: sigma_1 must be > 0");
  const double eta_limit1 = std::min(1.0 / sigma1, 2.0 / p.lipschitz_g);
  if (p.mode == PlanMode::Implicit && !(p.eta1 < eta_limit1))
    throw std::invalid_argument("build_plan: eta1 must be below min{1/sigma_1, 2/L_g}");

  GraduatedPlan plan;
  plan.gamma = p.gamma;
  plan.eps_target = p.eps;
  plan.C = p.C;
  plan.mode = p.mode;
  plan.alpha0 =
      std::min(1.0 / (16.0 * p.lipschitz_f * delta1), 1.0 / (std::sqrt(2.0 * sigma1) * delta1));
  const double target = plan.alpha0 * p.eps;
  if (target >= 1.0)
    throw std::invalid_argument("build_plan: alpha0 * eps >= 1 gives a zero-phase plan");
  plan.M = static_cast<int>(std::ceil(std::log(target) / std::log(p.gamma)));

  double delta = delta1;
  double eta = p.eta1;
  double b_real = static_cast<double>(p.b1);
  for (int m = 1; m <= plan.M + 1; ++m) {
    PlanPhase ph;
    ph.delta = delta;
    ph.sigma = p.sigma(m, delta);
    if (!(ph.sigma > 0.0)) throw std::invalid_argument("build_plan: sigma_m must be > 0");
    ph.kappa = p.kappa;
    ph.lambda = p.lambda;
    if (p.mode == PlanMode::Implicit) {
      ph.batch = std::max(1, static_cast<int>(std::lround(b_real)));
      // keep delta = eta C / sqrt(b) exact after rounding the batch
      ph.eta = delta * std::sqrt(static_cast<double>(ph.batch)) / p.C;
    } else {
      ph.batch = 1;
      ph.eta = p.cap_eta
                   ? std::min(eta, 0.9 * std::min(1.0 / ph.sigma, 2.0 / p.lipschitz_g))
                   : eta;
    }
    if (!(ph.eta > 0.0) || !(ph.eta < 2.0 / p.lipschitz_g))
      throw std::invalid_argument("build_plan: phase eta outside (0, 2/L_g)");
    ph.eps = ph.sigma * delta * delta / 2.0;
    ph.H = phase_H(delta, ph.eta, ph.sigma, p.lipschitz_f, p.lipschitz_g);
    if (!(ph.H > 0.0)) throw std::invalid_argument("build_plan: nonpositive H_m");
    ph.iters = static_cast<long>(std::ceil(ph.H / ph.eps));
    plan.phases.push_back(ph);
    if (m < plan.M) {  // the last two phases share parameters
      delta *= p.gamma;
      eta *= p.kappa;
      b_real *= p.lambda;
    }
  }
  return plan;
}

long GraduatedPlan::total_iters() const {
  long s = 0;
  for (const auto& ph : phases) s += ph.iters;
  return s;
}

Schedule GraduatedPlan::schedule() const {
  Schedule s;
  for (const auto& ph : phases) s.phases.push_back({ph.eta, ph.batch, ph.iters, ph.delta});
  return s;
}

std::string GraduatedPlan::table() const {
  std::ostringstream os;
  os << "phase delta eta batch eps_m T_m\n";
  for (std::size_t m = 0; m < phases.size(); ++m) {
    const auto& ph = phases[m];
    os << (m + 1) << ' ' << format_double(ph.delta) << ' ' << format_double(ph.eta) << ' '
       << ph.batch << ' ' << format_double(ph.eps) << ' ' << ph.iters << '\n';
  }
  return os.str();
}

GraduatedResult run_explicit(const GraduatedPlan& plan, const SmoothedFamily& fam, double x1) {
  GraduatedResult r;
  double x = x1;
  for (const auto& ph : plan.phases) {
    r.phase_inputs.push_back(x);
    r.steps_nominal += ph.iters;
    for (long t = 0; t < ph.iters; ++t) {
      const double xn = x - ph.eta * fam.deriv(x, ph.delta);
      if (!std::isfinite(xn) || std::fabs(xn) > kDivergenceLimit) {
        RunTrace prefix;
        prefix.final_x = {x};
        prefix.total_iters = r.steps_executed + t;
        throw DivergenceError("run_explicit: diverged in phase " +
                                  std::to_string(r.phase_inputs.size()),
                              prefix);
      }
      if (xn == x) {  // exact fixed point: the remaining iterates are identical
        r.steps_executed += t + 1;
        x = xn;
        goto phase_done;
      }
      x = xn;
    }
    r.steps_executed += ph.iters;
  phase_done:
    r.phase_values.push_back(fam.value(x, ph.delta));
  }
  r.x_final = x;
  return r;
}

ImplicitResult run_implicit(const GraduatedPlan& plan, const FiniteSumObjective& fs, double x1,
                            std::uint64_t seed, long record_stride) {
  if (plan.mode != PlanMode::Implicit)
    throw std::invalid_argument("run_implicit: plan is not in implicit mode");
  if (fs.spread > 0.0 && std::fabs(fs.spread - plan.C) > 1e-12 * std::max(1.0, plan.C))
    throw std::invalid_argument("run_implicit: fs spread does not match the plan's C");
  for (const auto& ph : plan.phases)
    if (ph.batch > fs.n) throw std::invalid_argument("run_implicit: batch exceeds n");
  ImplicitResult r;
  std::vector<double> x0{x1};
  r.trace = sgd_run(fs, x0, plan.schedule(), seed, record_stride);
  // phase entry points from the trace (stride 1 keeps them all exact)
  long t = 0;
  for (const auto& ph : plan.phases) {
    for (std::size_t i = 0; i < r.trace.t.size(); ++i)
      if (r.trace.t[i] == t) {
        r.phase_inputs.push_back(r.trace.iterates[i][0]);
        break;
      }
    t += ph.iters;
  }
  return r;
}

double find_smoothed_minimizer(const SmoothedFamily& fam, double delta, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("find_smoothed_minimizer: need lo < hi");
  const int n = 10000;
  double best_x = lo, best_v = fam.value(lo, delta);
  for (int i = 1; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    const double v = fam.value(x, delta);
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  double a = std::max(lo, best_x - (hi - lo) / n);
  double b = std::min(hi, best_x + (hi - lo) / n);
  // bisect on the derivative if it brackets a root; otherwise keep the grid point
  double ga = fam.deriv(a, delta), gb = fam.deriv(b, delta);
  if (ga == 0.0) return a;
  if (gb == 0.0) return b;
  if (ga * gb > 0.0) return best_x;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (a + b);
    const double gm = fam.deriv(mid, delta);
    if (gm == 0.0) return mid;
    if (ga * gm < 0.0) {
      b = mid;
    } else {
      a = mid;
      ga = gm;
    }
  }
  return 0.5 * (a + b);
}

ContainmentReport check_basin_containment(const std::vector<double>& phase_inputs,
                                          const GraduatedPlan& plan, const SmoothedFamily& fam,
                                          double lo, double hi) {
  if (phase_inputs.size() != plan.phases.size())
    throw std::invalid_argument("check_basin_containment: inputs/phases size mismatch");
  ContainmentReport rep;
  const double tight = 2.0 / plan.gamma - 1.0;
  for (std::size_t m = 0; m < plan.phases.size(); ++m) {
    const double delta = plan.phases[m].delta;
    const double xs = find_smoothed_minimizer(fam, delta, lo, hi);
    const double dist = std::fabs(phase_inputs[m] - xs);
    ++rep.checked;
    rep.worst_ratio = std::max(rep.worst_ratio, dist / (3.0 * delta));
    if (!(dist < 3.0 * delta)) {
      ++rep.violations;
      rep.ok = false;
    }
    // the first input is the user's start; the proof bound applies from m >= 2
    if (m > 0 && !(dist < tight * delta)) ++rep.tight_violations;
  }
  return rep;
}

}  // namespace igo
