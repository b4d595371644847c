#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace igo {

struct ObjectiveMetadata {
  double lipschitz_f = 0.0;  // L_f on the domain box
  double lipschitz_g = 0.0;  // gradient Lipschitz constant L_g on the box
  std::vector<std::pair<double, double>> domain_box;
  std::optional<std::vector<double>> minimizer;
  std::optional<double> strong_convexity;
};

// A differentiable scalar field with gradient and Lipschitz metadata.
// Immutable after construction; eval/grad are pure.
struct Objective {
  std::string id;
  int dim = 1;
  std::function<double(std::span<const double>)> eval;
  std::function<std::vector<double>(std::span<const double>)> grad;
  ObjectiveMetadata meta;

  double eval1(double x) const { return eval(std::span<const double>(&x, 1)); }
  double grad1(double x) const { return grad(std::span<const double>(&x, 1))[0]; }
};

double rastrigin1d(double x);
double rastrigin1d_grad(double x);
double dropwave1d(double x);
double dropwave1d_grad(double x);
double scalar_ce(double x);  // -log x on (0, 1]; throws std::domain_error outside
double scalar_ce_grad(double x);
double scalar_mse(double x);
double scalar_mse_grad(double x);

// Benchmark objectives with metadata (L_f, L_g by dense grid maximization of
// |f'| and |f''| over the domain box; cached at construction).
Objective make_rastrigin(int dim = 1, double box_half_width = 5.12);
Objective make_dropwave(double box_half_width = 2.0);
Objective make_quadratic(int dim = 1, double box_half_width = 10.0);  // f(x) = ||x||^2
Objective make_scalar_ce();
Objective make_scalar_mse(double box_half_width = 1.0);
Objective objective_by_id(const std::string& id);

// Closed-form smoothed value/derivative under unit-second-moment Gaussian
// noise (standard normal for d = 1). Supported ids: scalar_mse (exact),
// scalar_ce (second-order Taylor form, approximate), rastrigin (exact via
// the Gaussian characteristic function), quadratic (exact, 1-D).
struct SmoothedFamily {
  std::string id;
  bool approximate = false;  // true for the Taylor-expansion CE form
  std::function<double(double x, double delta)> value;
  std::function<double(double x, double delta)> deriv;
};
SmoothedFamily smoothed_family(const std::string& obj_id);  // throws if unsupported
double analytic_smoothed(const std::string& obj_id, double x, double delta);
double analytic_smoothed_deriv(const std::string& obj_id, double x, double delta);

enum class PerturbPattern { Gaussian, Alternating, Equispaced };

// f_i(x) = base(x) + a_i . x with sum a_i = 0 and mean ||a_i||^2 = spread^2,
// so the full gradient equals the base gradient and the single-sample
// gradient variance equals spread^2 exactly at every x.
struct FiniteSumObjective {
  Objective base;
  int n = 0;
  double spread = 0.0;  // C
  std::vector<std::vector<double>> perturb;

  double component_eval(int i, std::span<const double> x) const;
  std::vector<double> component_grad(int i, std::span<const double> x) const;
  std::vector<double> full_grad(std::span<const double> x) const;
  double full_eval(std::span<const double> x) const;
};

FiniteSumObjective make_finite_sum(const Objective& base, int n, double spread,
                                   std::uint64_t seed,
                                   PerturbPattern pattern = PerturbPattern::Gaussian);

// Average of b component gradients drawn i.i.d. uniformly with replacement;
// unbiased for the full gradient, variance spread^2 / b.
std::vector<double> minibatch_grad(const FiniteSumObjective& fs, std::span<const double> x, int b,
                                   std::uint64_t seed);

}  // namespace igo
