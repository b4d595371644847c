#include <doctest.h>

#include <cmath>

#include "igo/metrics.hpp"
#include "igo/stats.hpp"

using namespace igo;

TEST_SUITE_BEGIN("metrics");

TEST_CASE("gradient variance vanishes without noise") {
  const auto fs = make_finite_sum(make_quadratic(), 8, 0.0, 1);
  const std::vector<double> x{0.4};
  CHECK(empirical_grad_variance(fs, x, 1, 100, 5) == 0.0);
}

TEST_CASE("two-point construction has unit single-sample variance exactly") {
  // perturbations are +1 and -1; every b=1 gradient deviates by exactly 1
  const auto fs = make_finite_sum(make_quadratic(), 2, 1.0, 1, PerturbPattern::Alternating);
  const std::vector<double> x{0.0};
  CHECK(empirical_grad_variance(fs, x, 1, 1000, 7) == doctest::Approx(1.0));
}

TEST_CASE("variance follows C^2 / b and is monotone in b") {
  const auto fs = make_finite_sum(make_quadratic(), 64, 1.0, 11);
  const std::vector<double> x{1.0};
  double prev = 2.0;
  for (int b : {1, 4, 16}) {
    const double v = empirical_grad_variance(fs, x, b, 100000, 13);
    CHECK(v == doctest::Approx(1.0 / b).epsilon(0.05));
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(empirical_grad_variance(fs, x, 1, 1, 5), std::invalid_argument);
}

TEST_CASE("C^2 estimation lands within a factor of 4 of the truth") {
  const auto fs = make_finite_sum(make_quadratic(), 128, 1.0, 17);
  const std::vector<double> x0{1.0};
  const auto est = estimate_C2(fs, 0.1, 0.5, {1, 2, 4, 8, 16}, x0, 23);
  CHECK(est.C2_hat >= 0.25);
  CHECK(est.C2_hat <= 4.0);
  CHECK(est.C2_hat == doctest::Approx(est.b_star * 0.25 / 0.1));
  CHECK(est.steps_per_batch.size() == 5);
}

TEST_CASE("noise-free runs favor the smallest batch") {
  const auto fs = make_finite_sum(make_quadratic(), 16, 0.0, 3);
  const std::vector<double> x0{1.0};
  const auto est = estimate_C2(fs, 0.1, 0.5, {1, 2, 8}, x0, 5);
  CHECK(est.b_star == 1);
}

TEST_CASE("larger eta yields a smaller variance estimate") {
  const auto fs = make_finite_sum(make_quadratic(), 128, 1.0, 17);
  const std::vector<double> x0{1.0};
  const auto lo = estimate_C2(fs, 0.05, 0.6, {1, 2, 4}, x0, 29);
  const auto hi = estimate_C2(fs, 0.2, 0.6, {1, 2, 4}, x0, 29);
  CHECK(hi.C2_hat < lo.C2_hat);
}

TEST_CASE("unreachable threshold is an error") {
  const auto fs = make_finite_sum(make_quadratic(), 16, 1.0, 3);
  const std::vector<double> x0{1.0};
  CHECK_THROWS_AS(estimate_C2(fs, 0.1, 1e-3, {1, 2}, x0, 5, 2000), std::runtime_error);
}

TEST_CASE("sharpness oracles") {
  SharpnessQuery q;
  q.w = {0.0};
  q.rho = 0.1;
  q.c = {1.0};

  Objective half_quad;
  half_quad.id = "half_quad";
  half_quad.dim = 1;
  half_quad.eval = [](std::span<const double> x) { return 0.5 * x[0] * x[0]; };
  half_quad.grad = [](std::span<const double> x) { return std::vector<double>{x[0]}; };
  CHECK(adaptive_sharpness(half_quad, q, SharpnessMethod::Grid) == doctest::Approx(0.005));
  CHECK(adaptive_sharpness(half_quad, q, SharpnessMethod::CornerEnum) == doctest::Approx(0.005));

  Objective linear;
  linear.id = "linear";
  linear.dim = 1;
  linear.eval = [](std::span<const double> x) { return 3.0 * x[0]; };
  linear.grad = [](std::span<const double>) { return std::vector<double>{3.0}; };
  CHECK(adaptive_sharpness(linear, q, SharpnessMethod::Grid) == doctest::Approx(0.3));
  CHECK(adaptive_sharpness(linear, q, SharpnessMethod::SignGradientAscent) ==
        doctest::Approx(0.3).epsilon(1e-6));

  Objective flat;
  flat.id = "flat";
  flat.dim = 1;
  flat.eval = [](std::span<const double>) { return 4.0; };
  flat.grad = [](std::span<const double>) { return std::vector<double>{0.0}; };
  CHECK(adaptive_sharpness(flat, q, SharpnessMethod::Grid) == 0.0);
}

TEST_CASE("sharpness argument validation") {
  SharpnessQuery q;
  q.w = {0.0};
  q.rho = -1.0;
  q.c = {1.0};
  const auto obj = make_quadratic();
  CHECK_THROWS_AS(adaptive_sharpness(obj, q, SharpnessMethod::Grid), std::invalid_argument);
  q.rho = 0.1;
  q.c = {0.0};
  CHECK_THROWS_AS(adaptive_sharpness(obj, q, SharpnessMethod::Grid), std::invalid_argument);
  q.c = {1.0};
  q.p = 2.0;
  CHECK_THROWS_AS(adaptive_sharpness(obj, q, SharpnessMethod::CornerEnum), std::invalid_argument);
  const auto obj2 = make_quadratic(2);
  SharpnessQuery q2;
  q2.w = {0.0, 0.0};
  q2.c = {1.0, 1.0};
  CHECK_THROWS_AS(adaptive_sharpness(obj2, q2, SharpnessMethod::Grid), std::invalid_argument);
  CHECK_NOTHROW(adaptive_sharpness(obj2, q2, SharpnessMethod::CornerEnum));
}

TEST_CASE("sharpness grows like rho^2 at a quadratic minimum") {
  const auto obj = make_quadratic();
  std::vector<double> lr, ls;
  for (double rho : {0.01, 0.02, 0.05, 0.1, 0.2}) {
    SharpnessQuery q;
    q.w = {0.0};
    q.rho = rho;
    q.c = {1.0};
    lr.push_back(std::log(rho));
    ls.push_back(std::log(adaptive_sharpness(obj, q, SharpnessMethod::Grid)));
  }
  CHECK(stats::linear_fit(lr, ls).slope == doctest::Approx(2.0).epsilon(0.05));
  // and it is non-decreasing in rho
  for (std::size_t i = 1; i < ls.size(); ++i) CHECK(ls[i] >= ls[i - 1]);
}

TEST_CASE("convergence gap stays under H/T for a contracting gd run") {
  const ValueFn v = [](std::span<const double> x) { return x[0] * x[0]; };
  const GradFn g = [](std::span<const double> x) { return std::vector<double>{2.0 * x[0]}; };
  const std::vector<double> x0{1.0};
  const auto tr = gd_run(v, g, x0, 0.25, 200);
  const auto gap = convergence_gap(tr, 0.0, 169.0);
  CHECK(gap.ok);
  CHECK(gap.violations == 0);
  CHECK(gap.T.front() == 1);
  // a trace that starts at the optimum reports zero gap throughout
  const std::vector<double> opt{0.0};
  const auto flat = convergence_gap(gd_run(v, g, opt, 0.25, 10), 0.0, 1.0);
  for (double d : flat.gap) CHECK(d == 0.0);
}

TEST_CASE("sharpness sweep emits one row per grid cell") {
  const auto fs = make_finite_sum(make_rastrigin(), 64, 100.0, 41);
  const auto rows = sharpness_sweep(fs, {0.001, 0.002}, {1, 4, 16}, 2000, 3.5, 0.5, 7);
  REQUIRE(rows.size() == 6);
  for (const auto& r : rows) {
    CHECK(r.delta == doctest::Approx(r.eta * r.C / std::sqrt(static_cast<double>(r.batch))));
    CHECK(std::isfinite(r.final_value));
    CHECK(r.sharpness >= 0.0);
  }
}

TEST_SUITE_END();
