#include "igo/optimizers.hpp"

#include <chrono>
#include <cmath>

#include "igo/rng.hpp"
#include "igo/stats.hpp"

namespace igo {

void Schedule::validate(int n_components) const {
  if (phases.empty()) throw std::invalid_argument("schedule: no phases");
  for (const auto& p : phases) {
    if (!(p.eta > 0.0)) throw std::invalid_argument("schedule: eta must be > 0");
    if (p.batch < 1 || p.batch > n_components)
      throw std::invalid_argument("schedule: batch out of [1, n]");
    if (p.iters < 1) throw std::invalid_argument("schedule: iters must be >= 1");
  }
}

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void record(RunTrace& tr, long t, std::span<const double> x, double fx, double gnorm, int phase,
            double delta) {
  tr.t.push_back(t);
  tr.iterates.emplace_back(x.begin(), x.end());
  tr.values.push_back(fx);
  tr.grad_norms.push_back(gnorm);
  tr.phase_index.push_back(phase);
  tr.delta.push_back(delta);
}

}  // namespace

RunTrace gd_run(const ValueFn& value, const GradFn& grad, std::span<const double> x0, double eta,
                long iters, long record_stride) {
  if (!(eta > 0.0)) throw std::invalid_argument("gd_run: eta must be > 0");
  if (iters < 1) throw std::invalid_argument("gd_run: iters must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  RunTrace tr;
  std::vector<double> x(x0.begin(), x0.end());
  for (long t = 0; t < iters; ++t) {
    const auto g = grad(x);
    const double fx = value(x);
    if (t % record_stride == 0) record(tr, t, x, fx, norm(g), 0, 0.0);
    if (!std::isfinite(fx) || std::fabs(fx) > kDivergenceLimit || norm(x) > kDivergenceLimit) {
      tr.final_x = x;
      tr.final_value = fx;
      tr.total_iters = t;
      throw DivergenceError("gd_run: diverged at t=" + std::to_string(t), tr);
    }
    for (std::size_t j = 0; j < x.size(); ++j) x[j] -= eta * g[j];
  }
  const double fT = value(x);
  record(tr, iters, x, fT, norm(grad(x)), 0, 0.0);
  tr.final_x = x;
  tr.final_value = fT;
  tr.total_iters = iters;
  tr.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return tr;
}

RunTrace sgd_run(const FiniteSumObjective& fs, std::span<const double> x0,
                 const Schedule& schedule, std::uint64_t seed, long record_stride) {
  schedule.validate(fs.n);
  const auto start = std::chrono::steady_clock::now();
  RunTrace tr;
  tr.seed = seed;
  std::vector<double> x(x0.begin(), x0.end());
  long t = 0;
  std::uint64_t draw = 0;
  for (std::size_t m = 0; m < schedule.phases.size(); ++m) {
    const auto& ph = schedule.phases[m];
    const double delta = degree_of_smoothing(ph.eta, ph.batch, fs.spread);
    for (long k = 0; k < ph.iters; ++k, ++t) {
      const auto g = minibatch_grad(fs, x, ph.batch, Rng::derive(seed, draw++));
      const double fx = fs.full_eval(x);
      if (t % record_stride == 0)
        record(tr, t, x, fx, norm(g), static_cast<int>(m), delta);
      if (!std::isfinite(fx) || std::fabs(fx) > kDivergenceLimit || norm(x) > kDivergenceLimit) {
        tr.final_x = x;
        tr.final_value = fx;
        tr.total_iters = t;
        throw DivergenceError("sgd_run: diverged at t=" + std::to_string(t), tr);
      }
      for (std::size_t j = 0; j < x.size(); ++j) x[j] -= ph.eta * g[j];
    }
  }
  const double fT = fs.full_eval(x);
  const auto& last = schedule.phases.back();
  record(tr, t, x, fT, norm(fs.full_grad(x)), static_cast<int>(schedule.phases.size()) - 1,
         degree_of_smoothing(last.eta, last.batch, fs.spread));
  tr.final_x = x;
  tr.final_value = fT;
  tr.total_iters = t;
  tr.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return tr;
}

EquivalenceReport sgd_gd_equivalence(const Objective& base, double spread, double eta, int b,
                                     int n_runs, int steps, std::uint64_t seed) {
  if (base.dim != 1) throw std::invalid_argument("sgd_gd_equivalence: 1-D objectives only");
  if (n_runs < 2 || steps < 1) throw std::invalid_argument("sgd_gd_equivalence: bad sizes");
  const int n_components = 64;
  const auto fs = make_finite_sum(base, n_components, spread, Rng::derive(seed, 0xABCD),
                                  PerturbPattern::Gaussian);
  EquivalenceReport rep;
  rep.delta = degree_of_smoothing(eta, b, spread);

  // deterministic GD path
  std::vector<double> gd(steps + 1);
  double xg = base.meta.domain_box.empty() ? 1.0 : 1.0;
  gd[0] = xg;
  for (int t = 0; t < steps; ++t) {
    xg -= eta * base.grad1(xg);
    gd[t + 1] = xg;
  }
  rep.gd_path = gd;

  // per-step mean and std over independent SGD runs
  std::vector<std::vector<double>> paths(n_runs, std::vector<double>(steps + 1));
  for (int r = 0; r < n_runs; ++r) {
    double x = gd[0];
    paths[r][0] = x;
    std::uint64_t draw = 0;
    const std::uint64_t run_seed = Rng::derive(seed, static_cast<std::uint64_t>(r) + 1);
    for (int t = 0; t < steps; ++t) {
      const double xv = x;
      const auto g = minibatch_grad(fs, std::span<const double>(&xv, 1), b,
                                    Rng::derive(run_seed, draw++));
      x -= eta * g[0];
      paths[r][t + 1] = x;
    }
  }
  rep.sgd_mean.resize(steps + 1);
  rep.tolerance.resize(steps + 1);
  rep.deviation.resize(steps + 1);
  rep.all_within = true;
  std::vector<double> col(n_runs);
  for (int t = 0; t <= steps; ++t) {
    for (int r = 0; r < n_runs; ++r) col[r] = paths[r][t];
    const double m = stats::mean(col);
    const double sd = stats::stddev(col);
    rep.sgd_mean[t] = m;
    rep.tolerance[t] = 4.0 * sd / std::sqrt(static_cast<double>(n_runs));
    rep.deviation[t] = std::fabs(m - gd[t]);
    if (rep.deviation[t] <= rep.tolerance[t] || t == 0) ++rep.steps_within;
    else rep.all_within = false;
  }
  return rep;
}

}  // namespace igo
