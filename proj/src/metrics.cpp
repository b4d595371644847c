#include "igo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "igo/csv.hpp"
#include "igo/rng.hpp"

namespace igo {

double empirical_grad_variance(const FiniteSumObjective& fs, std::span<const double> x, int b,
                               int n_draws, std::uint64_t seed) {
  if (n_draws < 2) throw std::invalid_argument("empirical_grad_variance: need n_draws >= 2");
  const auto full = fs.full_grad(x);
  double acc = 0.0;
  for (int k = 0; k < n_draws; ++k) {
    const auto g = minibatch_grad(fs, x, b, Rng::derive(seed, static_cast<std::uint64_t>(k)));
    for (std::size_t j = 0; j < g.size(); ++j) acc += (g[j] - full[j]) * (g[j] - full[j]);
  }
  return acc / n_draws;
}

VarianceEstimate estimate_C2(const FiniteSumObjective& fs, double eta, double eps_threshold,
                             const std::vector<int>& batch_grid, std::span<const double> x0,
                             std::uint64_t seed, long iter_cap) {
  if (batch_grid.empty()) throw std::invalid_argument("estimate_C2: empty batch grid");
  if (!(eta > 0.0) || !(eps_threshold > 0.0))
    throw std::invalid_argument("estimate_C2: eta and eps_threshold must be > 0");
  VarianceEstimate est;
  est.eta = eta;
  est.eps_threshold = eps_threshold;
  const double eps2 = eps_threshold * eps_threshold;
  long best_work = -1;
  for (std::size_t bi = 0; bi < batch_grid.size(); ++bi) {
    const int b = batch_grid[bi];
    if (b < 1 || b > fs.n) throw std::invalid_argument("estimate_C2: batch outside [1, n]");
    std::vector<double> x(x0.begin(), x0.end());
    double prefix_sum = 0.0;
    long steps = -1;
    std::uint64_t draw = 0;
    const std::uint64_t run_seed = Rng::derive(seed, bi);
    for (long t = 1; t <= iter_cap; ++t) {
      const auto g = fs.full_grad(x);
      double g2 = 0.0;
      for (double v : g) g2 += v * v;
      prefix_sum += g2;
      if (prefix_sum / t <= eps2) {
        steps = t;
        break;
      }
      const auto gb = minibatch_grad(fs, x, b, Rng::derive(run_seed, draw++));
      for (std::size_t j = 0; j < x.size(); ++j) x[j] -= eta * gb[j];
    }
    est.steps_per_batch.emplace_back(b, steps);
    if (steps > 0) {
      const long work = steps * b;
      if (best_work < 0 || work < best_work) {
        best_work = work;
        est.b_star = b;
      }
    }
  }
  if (best_work < 0)
    throw std::runtime_error("estimate_C2: no batch size reached the gradient threshold");
  est.C2_hat = est.b_star * eps2 / eta;
  return est;
}

namespace {

double sharpness_grid_1d(const Objective& obj, const SharpnessQuery& q) {
  const double r = q.rho * q.c[0];
  const double fw = obj.eval1(q.w[0]);
  double best = 0.0;
  const int n = 20001;
  for (int i = 0; i < n; ++i) {
    const double d = -r + 2.0 * r * i / (n - 1);
    best = std::max(best, obj.eval1(q.w[0] + d) - fw);
  }
  return best;
}

double eval_shifted(const Objective& obj, const std::vector<double>& w,
                    const std::vector<double>& d) {
  std::vector<double> x(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) x[j] = w[j] + d[j];
  return obj.eval(x);
}

double sharpness_corners(const Objective& obj, const SharpnessQuery& q) {
  const auto dim = q.w.size();
  const double fw = obj.eval(q.w);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> d(dim), best_d(dim);
  for (std::uint64_t mask = 0; mask < (1ULL << dim); ++mask) {
    for (std::size_t j = 0; j < dim; ++j)
      d[j] = ((mask >> j) & 1U) ? q.rho * q.c[j] : -q.rho * q.c[j];
    const double v = eval_shifted(obj, q.w, d);
    if (v - fw > best) {
      best = v - fw;
      best_d = d;
    }
  }
  // interior maxima along each coordinate, others held at the best corner
  for (std::size_t j = 0; j < dim; ++j) {
    d = best_d;
    const int n = 401;
    for (int i = 0; i < n; ++i) {
      d[j] = -q.rho * q.c[j] + 2.0 * q.rho * q.c[j] * i / (n - 1);
      best = std::max(best, eval_shifted(obj, q.w, d) - fw);
    }
  }
  return std::max(best, 0.0);
}

double sharpness_ascent(const Objective& obj, const SharpnessQuery& q) {
  const auto dim = q.w.size();
  const double fw = obj.eval(q.w);
  double best = 0.0;
  Rng rng(0x5a17);
  std::vector<double> d(dim), x(dim);
  for (int restart = 0; restart < 16; ++restart) {
    for (std::size_t j = 0; j < dim; ++j) d[j] = q.rho * q.c[j] * rng.uniform(-1.0, 1.0);
    const double step0 = 0.25 * q.rho;
    for (int it = 0; it < 200; ++it) {
      for (std::size_t j = 0; j < dim; ++j) x[j] = q.w[j] + d[j];
      const auto g = obj.grad(x);
      const double s = step0 / (1.0 + it * 0.05);
      for (std::size_t j = 0; j < dim; ++j) {
        d[j] += s * q.c[j] * (g[j] > 0.0 ? 1.0 : (g[j] < 0.0 ? -1.0 : 0.0));
        d[j] = std::clamp(d[j], -q.rho * q.c[j], q.rho * q.c[j]);
      }
    }
    best = std::max(best, eval_shifted(obj, q.w, d) - fw);
  }
  return best;
}

}  // namespace

double adaptive_sharpness(const Objective& obj, const SharpnessQuery& q, SharpnessMethod method) {
  if (!(q.rho > 0.0)) throw std::invalid_argument("adaptive_sharpness: rho must be > 0");
  if (q.w.size() != static_cast<std::size_t>(obj.dim) || q.c.size() != q.w.size())
    throw std::invalid_argument("adaptive_sharpness: dimension mismatch");
  for (double cj : q.c)
    if (!(cj > 0.0)) throw std::invalid_argument("adaptive_sharpness: c must be positive");
  const bool p_inf = std::isinf(q.p);
  switch (method) {
    case SharpnessMethod::Grid:
      if (obj.dim != 1) throw std::invalid_argument("grid sharpness needs d = 1");
      return sharpness_grid_1d(obj, q);
    case SharpnessMethod::CornerEnum:
      if (!p_inf || obj.dim > 12)
        throw std::invalid_argument("corner enumeration needs p = inf and d <= 12");
      return sharpness_corners(obj, q);
    case SharpnessMethod::SignGradientAscent:
      if (!p_inf) throw std::invalid_argument("sign-gradient ascent needs p = inf");
      return sharpness_ascent(obj, q);
  }
  throw std::invalid_argument("adaptive_sharpness: bad method");
}

GapSeries convergence_gap(const RunTrace& trace, double f_star, double H) {
  GapSeries s;
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trace.values.size(); ++i) {
    running = std::min(running, trace.values[i] - f_star);
    const long T = trace.t[i];
    if (T < 1) continue;
    s.T.push_back(T);
    s.gap.push_back(running);
    s.bound.push_back(H / T);
    if (running > H / T) {
      ++s.violations;
      s.ok = false;
    }
  }
  return s;
}

std::vector<SharpnessSweepRow> sharpness_sweep(const FiniteSumObjective& fs,
                                               const std::vector<double>& etas,
                                               const std::vector<int>& batches, long iters,
                                               double x0, double rho, std::uint64_t seed) {
  std::vector<SharpnessSweepRow> rows;
  const auto dim = static_cast<std::size_t>(fs.base.dim);
  SharpnessQuery q;
  q.rho = rho;
  q.c.assign(dim, 1.0);
  const auto method = dim == 1 ? SharpnessMethod::Grid : SharpnessMethod::CornerEnum;
  std::uint64_t cell = 0;
  for (double eta : etas)
    for (int b : batches) {
      Schedule sch;
      sch.phases.push_back({eta, b, iters, 0.0});
      const std::uint64_t cell_seed = Rng::derive(seed, cell++);
      std::vector<double> start(dim, x0);
      const auto tr = sgd_run(fs, start, sch, cell_seed, iters);  // endpoints only
      q.w = tr.final_x;
      const double sh = adaptive_sharpness(fs.base, q, method);
      rows.push_back({eta, b, fs.spread, degree_of_smoothing(eta, b, fs.spread), tr.final_value,
                      sh, cell_seed});
    }
  return rows;
}

void write_sharpness_csv(const std::string& path, const std::vector<SharpnessSweepRow>& rows) {
  CsvWriter w(path);
  w.row({"eta", "batch", "C", "delta", "final_value", "sharpness", "seed"});
  for (const auto& r : rows)
    w.row({format_double(r.eta), std::to_string(r.batch), format_double(r.C),
           format_double(r.delta), format_double(r.final_value), format_double(r.sharpness),
           std::to_string(r.seed)});
}

}  // namespace igo
