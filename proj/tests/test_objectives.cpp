#include <doctest.h>

#include <cmath>

#include "igo/noise.hpp"
#include "igo/objectives.hpp"
#include "igo/rng.hpp"
#include "igo/smoothing.hpp"
#include "igo/stats.hpp"

using namespace igo;

TEST_SUITE_BEGIN("objectives");

TEST_CASE("benchmark values at reference points") {
  CHECK(rastrigin1d(0.0) == 0.0);
  CHECK(rastrigin1d(1.0) == doctest::Approx(1.0));
  CHECK(rastrigin1d(0.5) == doctest::Approx(20.25));
  CHECK(dropwave1d(0.0) == doctest::Approx(-1.0));
  CHECK(scalar_mse(3.0) == 9.0);
  CHECK(scalar_ce(1.0) == 0.0);
}

TEST_CASE("scalar cross-entropy rejects points outside (0, 1]") {
  CHECK_THROWS_AS(scalar_ce(0.0), std::domain_error);
  CHECK_THROWS_AS(scalar_ce(1.5), std::domain_error);
  CHECK_THROWS_AS(scalar_ce_grad(-0.1), std::domain_error);
}

TEST_CASE("gradients agree with central differences") {
  struct Case {
    double (*f)(double);
    double (*g)(double);
    double lo, hi;
  };
  const Case cases[] = {{rastrigin1d, rastrigin1d_grad, -5.0, 5.0},
                        {dropwave1d, dropwave1d_grad, -2.0, 2.0},
                        {scalar_ce, scalar_ce_grad, 0.05, 0.95},
                        {scalar_mse, scalar_mse_grad, -1.0, 1.0}};
  const double h = 1e-6;
  for (const auto& c : cases)
    for (int i = 0; i <= 50; ++i) {
      const double x = c.lo + (c.hi - c.lo) * i / 50.0;
      const double fd = (c.f(x + h) - c.f(x - h)) / (2.0 * h);
      CHECK(c.g(x) == doctest::Approx(fd).epsilon(1e-4).scale(1.0));
    }
}

TEST_CASE("metadata carries usable Lipschitz constants") {
  const auto r = make_rastrigin();
  // max |f'| on [-5.12, 5.12] is a bit above 2*5.12 + 20*pi
  CHECK(r.meta.lipschitz_f > 60.0);
  CHECK(r.meta.lipschitz_f < 80.0);
  // max |f''| = 2 + 40 pi^2
  CHECK(r.meta.lipschitz_g == doctest::Approx(2.0 + 40.0 * M_PI * M_PI).epsilon(0.01));
  const auto q = make_quadratic();
  CHECK(q.meta.strong_convexity == 2.0);
  CHECK(q.meta.lipschitz_g == 2.0);
}

TEST_CASE("multi-dimensional rastrigin is the separable sum of the 1-D form") {
  const auto r3 = make_rastrigin(3);
  CHECK(r3.dim == 3);
  const std::vector<double> x{0.4, -1.2, 2.0};
  CHECK(r3.eval(x) ==
        doctest::Approx(rastrigin1d(0.4) + rastrigin1d(-1.2) + rastrigin1d(2.0)));
  const auto g = r3.grad(x);
  REQUIRE(g.size() == 3);
  for (int j = 0; j < 3; ++j) CHECK(g[j] == doctest::Approx(rastrigin1d_grad(x[j])));
  // per-coordinate curvature bound is unchanged; the gradient bound scales
  CHECK(r3.meta.lipschitz_g == make_rastrigin().meta.lipschitz_g);
  CHECK(r3.meta.lipschitz_f ==
        doctest::Approx(make_rastrigin().meta.lipschitz_f * std::sqrt(3.0)));
  CHECK_THROWS_AS(make_rastrigin(0), std::invalid_argument);
}

TEST_CASE("analytic smoothed forms match Monte Carlo under standard gaussian noise") {
  const auto gauss = NoiseDistribution::gaussian();
  for (const char* id : {"scalar_mse", "rastrigin"}) {
    const auto obj = objective_by_id(id);
    for (double x : {-1.3, 0.0, 0.8})
      for (double delta : {0.1, 0.5}) {
        const auto est = mc_smooth_eval(obj, std::span<const double>(&x, 1), delta, gauss, 200000,
                                        911);
        const double exact = analytic_smoothed(id, x, delta);
        CAPTURE(id);
        CAPTURE(x);
        CAPTURE(delta);
        CHECK(std::fabs(est.value - exact) <= 4.0 * est.ci_half_width);
      }
  }
}

TEST_CASE("smoothed mse is exactly x^2 + delta^2") {
  CHECK(analytic_smoothed("scalar_mse", 2.0, 0.5) == doctest::Approx(4.25));
  CHECK(analytic_smoothed_deriv("scalar_mse", 2.0, 0.5) == doctest::Approx(4.0));
  CHECK(smoothed_family("scalar_ce").approximate);
  CHECK_FALSE(smoothed_family("rastrigin").approximate);
  CHECK_THROWS_AS(smoothed_family("dropwave"), std::invalid_argument);
}

TEST_CASE("finite-sum construction is exactly centered and scaled") {
  const auto base = make_quadratic();
  for (auto pat : {PerturbPattern::Gaussian, PerturbPattern::Alternating,
                   PerturbPattern::Equispaced}) {
    const auto fs = make_finite_sum(base, 16, 1.5, 99, pat);
    double s = 0.0, ms = 0.0;
    for (const auto& a : fs.perturb) {
      s += a[0];
      ms += a[0] * a[0];
    }
    CHECK(std::fabs(s) < 1e-12);
    CHECK(ms / fs.n == doctest::Approx(1.5 * 1.5).epsilon(1e-12));
    const std::vector<double> x{0.7};
    CHECK(fs.full_grad(x)[0] == base.grad(x)[0]);
    CHECK(fs.full_eval(x) == base.eval(x));
  }
  CHECK_THROWS_AS(make_finite_sum(base, 1, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_finite_sum(base, 4, -1.0, 0), std::invalid_argument);
}

TEST_CASE("minibatch gradients are unbiased") {
  const auto fs = make_finite_sum(make_quadratic(), 32, 1.0, 4);
  const std::vector<double> x{0.3};
  const double full = fs.full_grad(x)[0];
  double acc = 0.0;
  const int draws = 200000;
  for (int k = 0; k < draws; ++k) acc += minibatch_grad(fs, x, 2, Rng::derive(77, k))[0];
  CHECK(acc / draws == doctest::Approx(full).epsilon(0.01));
  CHECK_THROWS_AS(minibatch_grad(fs, x, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(minibatch_grad(fs, x, 33, 1), std::invalid_argument);
}

TEST_CASE("objective lookup by id") {
  CHECK(objective_by_id("rastrigin").id == "rastrigin");
  CHECK_THROWS_AS(objective_by_id("nope"), std::invalid_argument);
}

TEST_SUITE_END();
