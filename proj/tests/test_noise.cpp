#include <doctest.h>

#include <cmath>

#include "igo/noise.hpp"
#include "igo/rng.hpp"
#include "igo/stats.hpp"

using namespace igo;

TEST_SUITE_BEGIN("noise");

TEST_CASE("sampling is deterministic in the seed") {
  const auto d = NoiseDistribution::gaussian();
  const auto a = sample(d, 1000, 42);
  const auto b = sample(d, 1000, 42);
  const auto c = sample(d, 1000, 43);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("1-d gaussian has zero mean and unit second moment") {
  const auto u = sample(NoiseDistribution::gaussian(), 200000, 7);
  CHECK(std::fabs(stats::mean(u)) < 0.01);
  double m2 = 0.0;
  for (double v : u) m2 += v * v;
  m2 /= u.size();
  CHECK(m2 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("d-dim gaussian has per-coordinate variance 1/sqrt(d)") {
  const int dim = 4;
  const auto u = sample(NoiseDistribution::gaussian(dim), 100000, 11);
  std::vector<double> first;
  for (std::size_t i = 0; i < u.size(); i += dim) first.push_back(u[i]);
  CHECK(stats::variance(first) == doctest::Approx(1.0 / std::sqrt(4.0)).epsilon(0.03));
}

TEST_CASE("uniform draws respect the endpoints") {
  const auto u = sample(NoiseDistribution::uniform(-2.0, 3.0), 10000, 5);
  for (double v : u) {
    CHECK(v >= -2.0);
    CHECK(v < 3.0);
  }
}

TEST_CASE("exponential and rayleigh are centered") {
  for (auto d : {NoiseDistribution::exponential(2.0), NoiseDistribution::rayleigh(1.5)}) {
    const auto u = sample(d, 200000, 9);
    CHECK(std::fabs(stats::mean(u)) < 0.01);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(NoiseDistribution::uniform(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(NoiseDistribution::exponential(0.0), std::invalid_argument);
  CHECK_THROWS_AS(NoiseDistribution::rayleigh(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(NoiseDistribution::pareto(0.0), std::invalid_argument);
  CHECK_THROWS_AS(NoiseDistribution::from_name("triangular"), std::invalid_argument);
}

TEST_CASE("unit-expected-norm normalization for light-tailed families") {
  for (auto d : {NoiseDistribution::gaussian(), NoiseDistribution::gaussian(3),
                 NoiseDistribution::uniform(-1.0, 1.0), NoiseDistribution::exponential(1.0),
                 NoiseDistribution::rayleigh(1.0)}) {
    const auto nd = normalize_unit_expectation(d, 100000, 17);
    CHECK(nd.unit_norm);
    CHECK_FALSE(nd.heavy_passthrough);
    const auto u = sample(nd, 200000, 23);
    const auto dim = static_cast<std::size_t>(nd.dim);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); i += dim) {
      double nn = 0.0;
      for (std::size_t j = 0; j < dim; ++j) nn += u[i + j] * u[i + j];
      s += std::sqrt(nn);
    }
    s /= (u.size() / dim);
    CHECK(s == doctest::Approx(1.0).epsilon(0.01));
  }
}

TEST_CASE("heavy-tailed families pass through normalization unscaled") {
  const auto nd = normalize_unit_expectation(NoiseDistribution::cauchy(), 1000, 3);
  CHECK(nd.heavy_passthrough);
  CHECK_FALSE(nd.unit_norm);
  CHECK(nd.scale == 1.0);
}

TEST_CASE("analytic tail classification") {
  CHECK(classify_tail(NoiseDistribution::gaussian()).label == TailLabel::Light);
  CHECK(classify_tail(NoiseDistribution::uniform(-1, 1)).label == TailLabel::Light);
  CHECK(classify_tail(NoiseDistribution::exponential(1.0)).label == TailLabel::Light);
  CHECK(classify_tail(NoiseDistribution::rayleigh(1.0)).label == TailLabel::Light);
  CHECK(classify_tail(NoiseDistribution::pareto(1.5)).label == TailLabel::Heavy);
  CHECK(classify_tail(NoiseDistribution::cauchy()).label == TailLabel::Heavy);
  CHECK(classify_tail(NoiseDistribution::levy()).label == TailLabel::Heavy);
}

TEST_CASE("empirical tail test agrees with the analytic labels") {
  const char* names[] = {"gaussian", "uniform", "exponential", "rayleigh",
                         "pareto",   "cauchy",  "levy"};
  for (const char* name : names) {
    const auto d = NoiseDistribution::from_name(name);
    const auto draws = sample(d, 30000, 31);
    const auto t = empirical_tail_test(draws);
    CAPTURE(name);
    CAPTURE(t.kurtosis);
    CAPTURE(t.hill_index);
    CHECK(t.label == classify_tail(d).label);
  }
}

TEST_CASE("empirical tail test edge cases") {
  std::vector<double> zeros(2000, 0.0);
  const auto t = empirical_tail_test(zeros);
  CHECK(t.label == TailLabel::Light);
  CHECK(std::isinf(t.hill_index));

  std::vector<double> few(10, 1.0);
  CHECK_THROWS_AS(empirical_tail_test(few), std::invalid_argument);
}

TEST_SUITE_END();
