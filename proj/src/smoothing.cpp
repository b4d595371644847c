#include "igo/smoothing.hpp"

#include <cmath>
#include <stdexcept>

#include "igo/csv.hpp"
#include "igo/rng.hpp"

namespace igo {

namespace {

constexpr double kZ95 = 1.96;

struct Moments {
  double mean = 0.0;
  double std = 0.0;
  std::size_t n_finite = 0;
  std::size_t nonfinite = 0;
};

Moments accumulate(const std::vector<double>& vals) {
  Moments m;
  double s = 0.0;
  for (double v : vals) {
    if (std::isfinite(v)) {
      s += v;
      ++m.n_finite;
    } else {
      ++m.nonfinite;
    }
  }
  if (m.n_finite == 0) return m;
  m.mean = s / static_cast<double>(m.n_finite);
  double ss = 0.0;
  for (double v : vals)
    if (std::isfinite(v)) ss += (v - m.mean) * (v - m.mean);
  if (m.n_finite > 1) m.std = std::sqrt(ss / static_cast<double>(m.n_finite - 1));
  return m;
}

void finish(SmoothedEstimate& e, const Moments& m, std::size_t n_total) {
  e.n_samples = n_total;
  e.value = m.mean;
  e.ci_half_width = m.n_finite > 1 ? kZ95 * m.std / std::sqrt(static_cast<double>(m.n_finite)) : 0.0;
  e.nonfinite = m.nonfinite;
  e.unstable = m.nonfinite * 100 > n_total;  // >1% non-finite
}

}  // namespace

SmoothedEstimate mc_smooth_eval_panel(const Objective& obj, std::span<const double> x,
                                      double delta, std::span<const double> panel,
                                      const std::string& dist_name) {
  const auto d = static_cast<std::size_t>(obj.dim);
  if (panel.size() % d != 0) throw std::invalid_argument("panel size not a multiple of dim");
  const std::size_t n = panel.size() / d;
  SmoothedEstimate e;
  e.delta = delta;
  e.dist = dist_name;
  if (delta == 0.0) {
    e.value = obj.eval(x);
    e.n_samples = n;
    return e;
  }
  std::vector<double> vals(n);
  std::vector<double> shifted(d);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < d; ++j) shifted[j] = x[j] - delta * panel[k * d + j];
    vals[k] = obj.eval(shifted);
  }
  finish(e, accumulate(vals), n);
  return e;
}

SmoothedEstimate mc_smooth_grad_panel(const Objective& obj, std::span<const double> x,
                                      double delta, std::span<const double> panel,
                                      const std::string& dist_name) {
  const auto d = static_cast<std::size_t>(obj.dim);
  const std::size_t n = panel.size() / d;
  SmoothedEstimate e;
  e.delta = delta;
  e.dist = dist_name;
  if (delta == 0.0) {
    e.gradient = obj.grad(x);
    e.value = e.gradient[0];
    e.n_samples = n;
    return e;
  }
  std::vector<std::vector<double>> per_coord(d, std::vector<double>(n));
  std::vector<double> shifted(d);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < d; ++j) shifted[j] = x[j] - delta * panel[k * d + j];
    const auto g = obj.grad(shifted);
    for (std::size_t j = 0; j < d; ++j) per_coord[j][k] = g[j];
  }
  e.gradient.resize(d);
  double worst_ci = 0.0;
  std::size_t nonfinite = 0;
  for (std::size_t j = 0; j < d; ++j) {
    const auto m = accumulate(per_coord[j]);
    e.gradient[j] = m.mean;
    nonfinite = std::max(nonfinite, m.nonfinite);
    if (m.n_finite > 1)
      worst_ci = std::max(worst_ci, kZ95 * m.std / std::sqrt(static_cast<double>(m.n_finite)));
  }
  e.value = e.gradient[0];
  e.n_samples = n;
  e.ci_half_width = worst_ci;
  e.nonfinite = nonfinite;
  e.unstable = nonfinite * 100 > n;
  return e;
}

SmoothedEstimate mc_smooth_eval(const Objective& obj, std::span<const double> x, double delta,
                                const NoiseDistribution& dist, std::size_t n_samples,
                                std::uint64_t seed) {
  if (delta < 0.0) throw std::invalid_argument("mc_smooth_eval: delta must be >= 0");
  if (n_samples < 2) throw std::invalid_argument("mc_smooth_eval: need n_samples >= 2");
  const auto panel = sample(dist, n_samples, seed);
  return mc_smooth_eval_panel(obj, x, delta, panel, family_name(dist.family));
}

SmoothedEstimate mc_smooth_grad(const Objective& obj, std::span<const double> x, double delta,
                                const NoiseDistribution& dist, std::size_t n_samples,
                                std::uint64_t seed) {
  if (delta < 0.0) throw std::invalid_argument("mc_smooth_grad: delta must be >= 0");
  if (n_samples < 2) throw std::invalid_argument("mc_smooth_grad: need n_samples >= 2");
  const auto panel = sample(dist, n_samples, seed);
  return mc_smooth_grad_panel(obj, x, delta, panel, family_name(dist.family));
}

BoundReport check_error_bound(const Objective& obj, double delta, const NoiseDistribution& dist,
                              std::span<const double> grid, std::size_t n_samples,
                              std::uint64_t seed) {
  if (!(obj.meta.lipschitz_f > 0.0))
    throw std::invalid_argument("check_error_bound: objective lacks L_f metadata");
  const auto panel = sample(dist, n_samples, seed);
  BoundReport r;
  const double bound = delta * obj.meta.lipschitz_f;
  for (double x : grid) {
    const auto e = mc_smooth_eval_panel(obj, std::span<const double>(&x, 1), delta, panel,
                                        family_name(dist.family));
    const double err = std::fabs(e.value - obj.eval1(x));
    ++r.checked;
    if (err > bound + 4.0 * e.ci_half_width) {
      ++r.violations;
      r.ok = false;
    }
    if (bound > 0.0) r.max_ratio = std::max(r.max_ratio, err / bound);
  }
  return r;
}

LipschitzReport check_lipschitz_inheritance(const Objective& obj, double delta,
                                            const NoiseDistribution& dist, int pair_count,
                                            std::size_t n_samples, std::uint64_t seed) {
  if (!(obj.meta.lipschitz_f > 0.0) || !(obj.meta.lipschitz_g > 0.0))
    throw std::invalid_argument("check_lipschitz_inheritance: objective lacks L_f/L_g metadata");
  const auto panel = sample(dist, n_samples, seed);  // one panel for both pair points
  Rng rng(Rng::derive(seed, 1));
  LipschitzReport r;
  const auto& box = obj.meta.domain_box;
  const auto d = static_cast<std::size_t>(obj.dim);
  std::vector<double> x(d), y(d);
  for (int p = 0; p < pair_count; ++p) {
    for (std::size_t j = 0; j < d; ++j) {
      x[j] = rng.uniform(box[j].first, box[j].second);
      y[j] = rng.uniform(box[j].first, box[j].second);
    }
    double dist_xy = 0.0;
    for (std::size_t j = 0; j < d; ++j) dist_xy += (x[j] - y[j]) * (x[j] - y[j]);
    dist_xy = std::sqrt(dist_xy);
    if (dist_xy == 0.0) continue;

    const auto fx = mc_smooth_eval_panel(obj, x, delta, panel, family_name(dist.family));
    const auto fy = mc_smooth_eval_panel(obj, y, delta, panel, family_name(dist.family));
    const double vdiff = std::fabs(fx.value - fy.value);
    const double vbound = obj.meta.lipschitz_f * dist_xy;
    ++r.pairs;
    if (vdiff > vbound + 8.0 * (fx.ci_half_width + fy.ci_half_width)) {
      ++r.value_violations;
      r.ok = false;
    }
    r.max_value_ratio = std::max(r.max_value_ratio, vdiff / vbound);

    const auto gx = mc_smooth_grad_panel(obj, x, delta, panel, family_name(dist.family));
    const auto gy = mc_smooth_grad_panel(obj, y, delta, panel, family_name(dist.family));
    double gdiff = 0.0;
    for (std::size_t j = 0; j < d; ++j)
      gdiff += (gx.gradient[j] - gy.gradient[j]) * (gx.gradient[j] - gy.gradient[j]);
    gdiff = std::sqrt(gdiff);
    const double gbound = obj.meta.lipschitz_g * dist_xy;
    if (gdiff > gbound + 8.0 * (gx.ci_half_width + gy.ci_half_width)) {
      ++r.grad_violations;
      r.ok = false;
    }
    r.max_grad_ratio = std::max(r.max_grad_ratio, gdiff / gbound);
  }
  return r;
}

std::vector<SweepRow> smoothing_sweep(const Objective& obj, double delta,
                                      const std::vector<NoiseDistribution>& dists,
                                      std::span<const double> grid, std::size_t n_samples,
                                      std::uint64_t seed) {
  if (grid.empty()) throw std::invalid_argument("smoothing_sweep: empty grid");
  std::vector<SweepRow> rows;
  rows.reserve(dists.size() * grid.size());
  for (std::size_t di = 0; di < dists.size(); ++di) {
    const auto panel = sample(dists[di], n_samples, Rng::derive(seed, di));
    const std::string name = family_name(dists[di].family);
    for (double x : grid) {
      const auto e =
          mc_smooth_eval_panel(obj, std::span<const double>(&x, 1), delta, panel, name);
      rows.push_back(
          SweepRow{obj.id, name, delta, x, e.value, e.ci_half_width, e.n_samples, e.unstable});
    }
  }
  return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  CsvWriter w(path);
  w.row({"objective", "distribution", "delta", "x", "estimate", "ci", "n_samples",
         "unstable_flag"});
  for (const auto& r : rows)
    w.row({r.objective, r.dist, format_double(r.delta), format_double(r.x),
           format_double(r.estimate), format_double(r.ci), std::to_string(r.n_samples),
           r.unstable ? "1" : "0"});
}

}  // namespace igo
