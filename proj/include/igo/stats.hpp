#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace igo::stats {

inline double mean(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("mean: empty input");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double variance(std::span<const double> v) {
  if (v.size() < 2) throw std::invalid_argument("variance: need >= 2 samples");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

inline double stddev(std::span<const double> v) { return std::sqrt(variance(v)); }

// Fisher excess kurtosis (0 for the normal distribution).
inline double excess_kurtosis(std::span<const double> v) {
  if (v.size() < 4) throw std::invalid_argument("kurtosis: need >= 4 samples");
  const double m = mean(v);
  double m2 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = x - m;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double n = static_cast<double>(v.size());
  m2 /= n;
  m4 /= n;
  if (m2 == 0.0) return 0.0;  // degenerate (constant) sample
  return m4 / (m2 * m2) - 3.0;
}

// Hill estimator of the tail index over the top `tail_fraction` order
// statistics of |x|. Large values mean a light (fast-decaying) tail; a
// Pareto(alpha) sample estimates roughly alpha.
inline double hill_tail_index(std::span<const double> v, double tail_fraction = 0.05) {
  if (v.size() < 20) throw std::invalid_argument("hill: need >= 20 samples");
  std::vector<double> a(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) a[i] = std::fabs(v[i]);
  std::sort(a.begin(), a.end(), std::greater<>());
  std::size_t k = static_cast<std::size_t>(std::floor(tail_fraction * static_cast<double>(a.size())));
  k = std::max<std::size_t>(k, 10);
  const double xk = a[k];
  if (!(xk > 0.0)) return std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += std::log(a[i] / xk);
  s /= static_cast<double>(k);
  if (s <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / s;
}

inline std::vector<double> ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // mid-rank for ties
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("pearson: size mismatch or too few points");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = ranks(x), ry = ranks(y);
  return pearson(rx, ry);
}

struct LinFit {
  double slope;
  double intercept;
};

inline LinFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linear_fit: size mismatch or too few points");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace igo::stats
