#include "igo/objectives.hpp"

#include <cmath>
#include <stdexcept>

#include "igo/rng.hpp"

namespace igo {

double rastrigin1d(double x) { return x * x - 10.0 * std::cos(2.0 * M_PI * x) + 10.0; }
double rastrigin1d_grad(double x) { return 2.0 * x + 20.0 * M_PI * std::sin(2.0 * M_PI * x); }

double dropwave1d(double x) {
  return -(1.0 + std::cos(12.0 * M_PI * x)) / (0.5 * x * x + 2.0);
}
double dropwave1d_grad(double x) {
  const double num = 1.0 + std::cos(12.0 * M_PI * x);
  const double den = 0.5 * x * x + 2.0;
  return (12.0 * M_PI * std::sin(12.0 * M_PI * x) * den + num * x) / (den * den);
}

double scalar_ce(double x) {
  if (!(x > 0.0) || x > 1.0) throw std::domain_error("scalar_ce: x must be in (0, 1]");
  return -std::log(x);
}
double scalar_ce_grad(double x) {
  if (!(x > 0.0) || x > 1.0) throw std::domain_error("scalar_ce: x must be in (0, 1]");
  return -1.0 / x;
}

double scalar_mse(double x) { return x * x; }
double scalar_mse_grad(double x) { return 2.0 * x; }

namespace {

Objective make_1d(std::string id, double (*f)(double), double (*g)(double), double half_width,
                  std::optional<double> minimizer, std::optional<double> strong_convexity) {
  Objective o;
  o.id = std::move(id);
  o.dim = 1;
  o.eval = [f](std::span<const double> x) { return f(x[0]); };
  o.grad = [g](std::span<const double> x) { return std::vector<double>{g(x[0])}; };
  o.meta.domain_box = {{-half_width, half_width}};
  if (minimizer) o.meta.minimizer = std::vector<double>{*minimizer};
  o.meta.strong_convexity = strong_convexity;
  // L_f = max |f'|, L_g = max |f''| (central difference) on a dense grid.
  const int n = 100001;
  double lf = 0.0, lg = 0.0;
  const double h = 1e-5;
  for (int i = 0; i < n; ++i) {
    const double x = -half_width + 2.0 * half_width * i / (n - 1);
    lf = std::max(lf, std::fabs(g(x)));
    lg = std::max(lg, std::fabs((g(x + h) - g(x - h)) / (2.0 * h)));
  }
  o.meta.lipschitz_f = lf;
  o.meta.lipschitz_g = lg;
  return o;
}

}  // namespace

Objective make_rastrigin(int dim, double box_half_width) {
  if (dim == 1)
    return make_1d("rastrigin", rastrigin1d, rastrigin1d_grad, box_half_width, 0.0, std::nullopt);
  if (dim < 1) throw std::invalid_argument("make_rastrigin: dim must be >= 1");
  // separable sum of the 1-D form; per-coordinate curvature is unchanged
  Objective base = make_rastrigin(1, box_half_width);
  Objective o;
  o.id = "rastrigin";
  o.dim = dim;
  o.eval = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += rastrigin1d(v);
    return s;
  };
  o.grad = [](std::span<const double> x) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = rastrigin1d_grad(x[i]);
    return g;
  };
  o.meta.domain_box.assign(dim, {-box_half_width, box_half_width});
  o.meta.minimizer = std::vector<double>(dim, 0.0);
  o.meta.lipschitz_f = base.meta.lipschitz_f * std::sqrt(static_cast<double>(dim));
  o.meta.lipschitz_g = base.meta.lipschitz_g;
  return o;
}

Objective make_dropwave(double box_half_width) {
  return make_1d("dropwave", dropwave1d, dropwave1d_grad, box_half_width, 0.0, std::nullopt);
}

Objective make_quadratic(int dim, double box_half_width) {
  Objective o;
  o.id = "quadratic";
  o.dim = dim;
  o.eval = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  };
  o.grad = [](std::span<const double> x) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * x[i];
    return g;
  };
  o.meta.domain_box.assign(dim, {-box_half_width, box_half_width});
  o.meta.minimizer = std::vector<double>(dim, 0.0);
  o.meta.strong_convexity = 2.0;
  o.meta.lipschitz_f = 2.0 * box_half_width * std::sqrt(static_cast<double>(dim));
  o.meta.lipschitz_g = 2.0;
  return o;
}

Objective make_scalar_ce() {
  Objective o;
  o.id = "scalar_ce";
  o.dim = 1;
  o.eval = [](std::span<const double> x) { return scalar_ce(x[0]); };
  o.grad = [](std::span<const double> x) { return std::vector<double>{scalar_ce_grad(x[0])}; };
  o.meta.domain_box = {{0.05, 1.0}};
  o.meta.minimizer = std::vector<double>{1.0};
  o.meta.strong_convexity = 1.0;
  o.meta.lipschitz_f = 1.0 / 0.05;
  o.meta.lipschitz_g = 1.0 / (0.05 * 0.05);
  return o;
}

Objective make_scalar_mse(double box_half_width) {
  Objective o = make_quadratic(1, box_half_width);
  o.id = "scalar_mse";
  return o;
}

Objective objective_by_id(const std::string& id) {
  if (id == "rastrigin") return make_rastrigin();
  if (id == "dropwave") return make_dropwave();
  if (id == "quadratic") return make_quadratic();
  if (id == "scalar_ce") return make_scalar_ce();
  if (id == "scalar_mse") return make_scalar_mse();
  throw std::invalid_argument("unknown objective id: " + id);
}

SmoothedFamily smoothed_family(const std::string& obj_id) {
  SmoothedFamily f;
  f.id = obj_id;
  if (obj_id == "scalar_mse" || obj_id == "quadratic") {
    f.value = [](double x, double d) { return x * x + d * d; };
    f.deriv = [](double x, double) { return 2.0 * x; };
    return f;
  }
  if (obj_id == "scalar_ce") {
    f.approximate = true;  // second-order Taylor form
    f.value = [](double x, double d) { return -std::log(x) + d * d / (2.0 * x * x); };
    f.deriv = [](double x, double d) { return -1.0 / x - d * d / (x * x * x); };
    return f;
  }
  if (obj_id == "rastrigin") {
    // E[cos(2 pi (x - d u))] = cos(2 pi x) exp(-2 pi^2 d^2) for u ~ N(0, 1)
    f.value = [](double x, double d) {
      const double att = std::exp(-2.0 * M_PI * M_PI * d * d);
      return x * x + d * d - 10.0 * std::cos(2.0 * M_PI * x) * att + 10.0;
    };
    f.deriv = [](double x, double d) {
      const double att = std::exp(-2.0 * M_PI * M_PI * d * d);
      return 2.0 * x + 20.0 * M_PI * std::sin(2.0 * M_PI * x) * att;
    };
    return f;
  }
  throw std::invalid_argument("no analytic smoothed form for objective: " + obj_id);
}

double analytic_smoothed(const std::string& obj_id, double x, double delta) {
  if (delta < 0.0) throw std::invalid_argument("analytic_smoothed: delta must be >= 0");
  return smoothed_family(obj_id).value(x, delta);
}

double analytic_smoothed_deriv(const std::string& obj_id, double x, double delta) {
  if (delta < 0.0) throw std::invalid_argument("analytic_smoothed: delta must be >= 0");
  return smoothed_family(obj_id).deriv(x, delta);
}

double FiniteSumObjective::component_eval(int i, std::span<const double> x) const {
  double s = base.eval(x);
  for (std::size_t j = 0; j < x.size(); ++j) s += perturb[i][j] * x[j];
  return s;
}

std::vector<double> FiniteSumObjective::component_grad(int i, std::span<const double> x) const {
  auto g = base.grad(x);
  for (std::size_t j = 0; j < g.size(); ++j) g[j] += perturb[i][j];
  return g;
}

std::vector<double> FiniteSumObjective::full_grad(std::span<const double> x) const {
  return base.grad(x);  // perturbations sum to zero
}

double FiniteSumObjective::full_eval(std::span<const double> x) const { return base.eval(x); }

FiniteSumObjective make_finite_sum(const Objective& base, int n, double spread,
                                   std::uint64_t seed, PerturbPattern pattern) {
  if (n < 2) throw std::invalid_argument("make_finite_sum: n must be >= 2");
  if (spread < 0.0) throw std::invalid_argument("make_finite_sum: spread must be >= 0");
  FiniteSumObjective fs;
  fs.base = base;
  fs.n = n;
  fs.spread = spread;
  const int d = base.dim;
  fs.perturb.assign(n, std::vector<double>(d, 0.0));
  if (spread == 0.0) return fs;

  switch (pattern) {
    case PerturbPattern::Gaussian: {
      Rng rng(seed);
      for (auto& a : fs.perturb)
        for (auto& v : a) v = rng.normal();
      break;
    }
    case PerturbPattern::Alternating: {
      if (n % 2 != 0) throw std::invalid_argument("alternating pattern needs even n");
      for (int i = 0; i < n; ++i) fs.perturb[i][0] = (i % 2 == 0) ? 1.0 : -1.0;
      break;
    }
    case PerturbPattern::Equispaced: {
      for (int i = 0; i < n; ++i)
        fs.perturb[i][0] = static_cast<double>(2 * i - (n - 1)) / 2.0;
      break;
    }
  }
  // Center to exact zero sum, then scale so mean ||a_i||^2 = spread^2.
  for (int j = 0; j < d; ++j) {
    double m = 0.0;
    for (const auto& a : fs.perturb) m += a[j];
    m /= n;
    for (auto& a : fs.perturb) a[j] -= m;
  }
  double ms = 0.0;
  for (const auto& a : fs.perturb)
    for (double v : a) ms += v * v;
  ms /= n;
  if (!(ms > 0.0)) throw std::invalid_argument("make_finite_sum: degenerate perturbation pattern");
  const double k = spread / std::sqrt(ms);
  for (auto& a : fs.perturb)
    for (auto& v : a) v *= k;
  return fs;
}

std::vector<double> minibatch_grad(const FiniteSumObjective& fs, std::span<const double> x, int b,
                                   std::uint64_t seed) {
  if (b < 1 || b > fs.n) throw std::invalid_argument("minibatch_grad: b out of [1, n]");
  auto g = fs.base.grad(x);
  if (fs.spread == 0.0) return g;
  Rng rng(seed);
  std::vector<double> acc(g.size(), 0.0);
  for (int k = 0; k < b; ++k) {
    const auto i = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(fs.n));
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += fs.perturb[i][j];
  }
  for (std::size_t j = 0; j < g.size(); ++j) g[j] += acc[j] / b;
  return g;
}

}  // namespace igo
