#include <doctest.h>

#include <cmath>

#include "igo/graduated.hpp"
#include "igo/stats.hpp"

using namespace igo;

namespace {

PlanParams reference_params() {
  PlanParams p;
  p.eps = 0.1;
  p.gamma = 1.0 / std::sqrt(2.0);
  p.delta1 = 1.0;
  p.eta1 = 0.1;
  p.sigma = constant_sigma(2.0);
  p.lipschitz_f = 0.625;  // makes alpha0 = 1/(16 L_f delta1) = 0.1
  p.lipschitz_g = 2.0;
  p.mode = PlanMode::Explicit;
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("graduated");

TEST_CASE("phase count and ladder follow the closed forms") {
  const auto plan = build_plan(reference_params());
  CHECK(plan.alpha0 == doctest::Approx(0.1));
  CHECK(plan.M == 14);  // ceil(log_{1/sqrt 2}(0.01))
  REQUIRE(plan.phases.size() == 15);
  // delta_M = delta_1 gamma^(M-1), and the last two phases share parameters
  CHECK(plan.phases[13].delta ==
        doctest::Approx(std::pow(plan.gamma, 13)).epsilon(1e-12));
  CHECK(plan.phases[14].delta == plan.phases[13].delta);
  CHECK(plan.phases[14].eta == plan.phases[13].eta);
  for (std::size_t m = 0; m + 2 < plan.phases.size(); ++m)
    CHECK(plan.phases[m + 1].delta == doctest::Approx(plan.gamma * plan.phases[m].delta));
  for (const auto& ph : plan.phases) {
    CHECK(ph.eps == doctest::Approx(ph.sigma * ph.delta * ph.delta / 2.0));
    CHECK(ph.iters >= 1);
    CHECK(ph.iters == static_cast<long>(std::ceil(ph.H / ph.eps)));
  }
}

TEST_CASE("plan construction rejects bad inputs") {
  auto p = reference_params();
  p.gamma = 0.3;
  CHECK_THROWS_AS(build_plan(p), std::invalid_argument);
  p.gamma = 1.0;
  CHECK_THROWS_AS(build_plan(p), std::invalid_argument);
  p = reference_params();
  p.eps = 1.5;
  CHECK_THROWS_AS(build_plan(p), std::invalid_argument);
  p = reference_params();
  p.delta1 = 1e-3;  // alpha0 = 100, alpha0 * eps >= 1: nothing to ladder over
  CHECK_THROWS_AS(build_plan(p), std::invalid_argument);
  p = reference_params();
  p.sigma = nullptr;
  CHECK_THROWS_AS(build_plan(p), std::invalid_argument);
}

TEST_CASE("method presets satisfy kappa / sqrt(lambda) = gamma") {
  const double g = 1.0 / std::sqrt(2.0);
  for (auto m : {MethodPreset::LrDecay, MethodPreset::BatchGrowth, MethodPreset::Mixed}) {
    const auto [kappa, lambda] = preset_multipliers(m, g);
    CHECK(kappa / std::sqrt(lambda) == doctest::Approx(g).epsilon(1e-12));
  }
  const auto [ck, cl] = preset_multipliers(MethodPreset::Constant, g);
  CHECK(ck == 1.0);
  CHECK(cl == 1.0);
  // the mixed pair is fixed, so it is inconsistent with any other gamma
  const auto [mk, ml] = preset_multipliers(MethodPreset::Mixed, 0.6);
  CHECK(mk / std::sqrt(ml) != doctest::Approx(0.6));
  CHECK(preset_from_name("batch-growth") == MethodPreset::BatchGrowth);
  CHECK_THROWS_AS(preset_from_name("adam"), std::invalid_argument);
}

TEST_CASE("implicit plans keep delta = eta C / sqrt(b) exact across batch rounding") {
  PlanParams p;
  p.eps = 0.1;
  p.gamma = 1.0 / std::sqrt(2.0);
  p.eta1 = 0.3;
  p.b1 = 1;
  p.C = 1.0;
  const auto [kappa, lambda] = preset_multipliers(MethodPreset::Mixed, p.gamma);
  p.kappa = kappa;
  p.lambda = lambda;
  p.sigma = constant_sigma(2.0);
  p.lipschitz_f = 20.0;
  p.lipschitz_g = 2.0;
  p.mode = PlanMode::Implicit;
  const auto plan = build_plan(p);
  double expect = 0.3;
  for (std::size_t m = 0; m < plan.phases.size(); ++m) {
    const auto& ph = plan.phases[m];
    CHECK(ph.eta * p.C / std::sqrt(static_cast<double>(ph.batch)) ==
          doctest::Approx(ph.delta).epsilon(1e-14));
    CHECK(ph.delta == doctest::Approx(expect).epsilon(1e-12));
    if (m + 2 < plan.phases.size()) expect *= p.gamma;  // last two phases repeat
  }
  p.kappa = 0.9;  // 0.9 / sqrt(1.5) != gamma
  CHECK_THROWS_AS(build_plan(p), std::invalid_argument);
}

TEST_CASE("total work scales like 1/eps^2 for the lr-decay ladder") {
  std::vector<double> log_eps, log_T;
  for (double eps : {0.2, 0.1, 0.05}) {
    PlanParams p;
    p.eps = eps;
    p.gamma = 1.0 / std::sqrt(2.0);
    p.eta1 = 0.4;
    p.b1 = 1;
    p.C = 1.0;
    p.kappa = p.gamma;  // lr-decay: lambda = 1
    p.lambda = 1.0;
    p.sigma = constant_sigma(2.0);
    p.lipschitz_f = 20.0;
    p.lipschitz_g = 2.0;
    p.mode = PlanMode::Implicit;
    const auto plan = build_plan(p);
    log_eps.push_back(std::log(eps));
    log_T.push_back(std::log(static_cast<double>(plan.total_iters())));
  }
  const auto fit = stats::linear_fit(log_eps, log_T);
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(0.15));
}

TEST_CASE("explicit run on the quadratic family reaches the optimum") {
  auto p = reference_params();
  p.lipschitz_f = 2.0;  // quadratic on [-1, 1]
  const auto plan = build_plan(p);
  const auto fam = smoothed_family("quadratic");
  const auto res = run_explicit(plan, fam, 0.9);
  CHECK(std::fabs(res.x_final) < 1e-6);
  CHECK(res.phase_inputs.size() == plan.phases.size());
  CHECK(res.steps_executed <= res.steps_nominal);
}

TEST_CASE("a single-phase plan degenerates to one gd run") {
  GraduatedPlan plan;
  plan.gamma = 0.5;
  plan.M = 0;
  plan.mode = PlanMode::Explicit;
  plan.phases.push_back({0.5, 2.0, 0.25, 10.0, 0.25, 1, 40, 1.0, 1.0});
  const auto fam = smoothed_family("quadratic");
  const auto res = run_explicit(plan, fam, 1.0);
  // eta = 0.25 on f' = 2x contracts by 1/2 per step
  CHECK(res.phase_inputs == std::vector<double>{1.0});
  CHECK(res.x_final == std::pow(0.5, 40));
}

TEST_CASE("smoothed-rastrigin ladder escapes the local basin that traps plain gd") {
  const auto obj = make_rastrigin();
  const auto fam = smoothed_family("rastrigin");
  PlanParams p;
  p.eps = 0.05;
  p.gamma = 1.0 / std::sqrt(2.0);
  p.delta1 = 0.7;
  p.cap_eta = true;
  p.eta1 = 0.9 * 2.0 / obj.meta.lipschitz_g;
  p.sigma = measured_sigma(fam);
  p.lipschitz_f = obj.meta.lipschitz_f;
  p.lipschitz_g = obj.meta.lipschitz_g;
  const auto plan = build_plan(p);
  const auto res = run_explicit(plan, fam, 0.6);
  CHECK(std::fabs(res.x_final) <= 0.05);

  // plain gd from the same start settles into the local minimum near 1
  double x = 0.6;
  const double eta = 0.9 * 2.0 / obj.meta.lipschitz_g;
  for (int t = 0; t < 200000; ++t) {
    const double xn = x - eta * rastrigin1d_grad(x);
    if (xn == x) break;
    x = xn;
  }
  CHECK(std::fabs(x) > 0.9);

  const auto rep = check_basin_containment(res.phase_inputs, plan, fam, -5.12, 5.12);
  CHECK(rep.ok);
  CHECK(rep.violations == 0);
  CHECK(rep.tight_violations == 0);
}

TEST_CASE("smoothed minimizer search") {
  const auto quad = smoothed_family("quadratic");
  CHECK(std::fabs(find_smoothed_minimizer(quad, 0.3, -1.0, 1.0)) < 1e-9);
  const auto ras = smoothed_family("rastrigin");
  CHECK(std::fabs(find_smoothed_minimizer(ras, 0.2, -2.0, 2.0)) < 1e-9);
  CHECK_THROWS_AS(find_smoothed_minimizer(quad, 0.1, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("measured sigma recovers the quadratic curvature") {
  const auto fam = smoothed_family("quadratic");
  CHECK(measure_sigma(fam, 0.5, 0.0) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("implicit run matches plain sgd for a single-phase plan") {
  PlanParams p;
  p.eps = 0.5;
  p.gamma = 0.5;
  p.eta1 = 0.2;
  p.b1 = 2;
  p.C = 1.0;
  p.kappa = 0.5;
  p.lambda = 1.0;
  p.sigma = constant_sigma(2.0);
  p.lipschitz_f = 2.0;
  p.lipschitz_g = 2.0;
  p.mode = PlanMode::Implicit;
  auto plan = build_plan(p);
  plan.phases.resize(1);  // inspect just the head phase
  const auto fs = make_finite_sum(make_quadratic(), 8, 1.0, 3);
  const auto res = run_implicit(plan, fs, 0.5, 99);
  const std::vector<double> x0{0.5};
  const auto direct = sgd_run(fs, x0, plan.schedule(), 99);
  CHECK(res.trace.final_x[0] == direct.final_x[0]);

  auto oversized = plan;
  oversized.phases[0].batch = 99;  // more than fs.n components
  CHECK_THROWS_AS(run_implicit(oversized, fs, 0.5, 1), std::invalid_argument);
}

TEST_SUITE_END();
