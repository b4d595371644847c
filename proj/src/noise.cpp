#include "igo/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "igo/rng.hpp"
#include "igo/stats.hpp"

namespace igo {

const char* family_name(NoiseFamily f) {
  switch (f) {
    case NoiseFamily::Gaussian: return "gaussian";
    case NoiseFamily::Uniform: return "uniform";
    case NoiseFamily::Exponential: return "exponential";
    case NoiseFamily::Rayleigh: return "rayleigh";
    case NoiseFamily::Pareto: return "pareto";
    case NoiseFamily::Cauchy: return "cauchy";
    case NoiseFamily::Levy: return "levy";
  }
  return "?";
}

NoiseFamily family_from_name(const std::string& name) {
  if (name == "gaussian") return NoiseFamily::Gaussian;
  if (name == "uniform") return NoiseFamily::Uniform;
  if (name == "exponential") return NoiseFamily::Exponential;
  if (name == "rayleigh") return NoiseFamily::Rayleigh;
  if (name == "pareto") return NoiseFamily::Pareto;
  if (name == "cauchy") return NoiseFamily::Cauchy;
  if (name == "levy") return NoiseFamily::Levy;
  throw std::invalid_argument("unknown noise family: " + name);
}

bool family_is_light_tailed(NoiseFamily f) {
  switch (f) {
    case NoiseFamily::Gaussian:
    case NoiseFamily::Uniform:
    case NoiseFamily::Exponential:
    case NoiseFamily::Rayleigh:
      return true;
    case NoiseFamily::Pareto:
    case NoiseFamily::Cauchy:
    case NoiseFamily::Levy:
      return false;
  }
  return false;
}

NoiseDistribution NoiseDistribution::gaussian(int dim) {
  NoiseDistribution d;
  d.family = NoiseFamily::Gaussian;
  d.dim = dim;
  d.validate();
  return d;
}

NoiseDistribution NoiseDistribution::uniform(double lo, double hi, int dim) {
  NoiseDistribution d;
  d.family = NoiseFamily::Uniform;
  d.lo = lo;
  d.hi = hi;
  d.dim = dim;
  d.validate();
  return d;
}

NoiseDistribution NoiseDistribution::exponential(double rate, int dim) {
  NoiseDistribution d;
  d.family = NoiseFamily::Exponential;
  d.rate = rate;
  d.dim = dim;
  d.validate();
  return d;
}

NoiseDistribution NoiseDistribution::rayleigh(double sigma, int dim) {
  NoiseDistribution d;
  d.family = NoiseFamily::Rayleigh;
  d.sigma = sigma;
  d.dim = dim;
  d.validate();
  return d;
}

NoiseDistribution NoiseDistribution::pareto(double shape, int dim) {
  NoiseDistribution d;
  d.family = NoiseFamily::Pareto;
  d.shape = shape;
  d.dim = dim;
  d.validate();
  return d;
}

NoiseDistribution NoiseDistribution::cauchy(int dim) {
  NoiseDistribution d;
  d.family = NoiseFamily::Cauchy;
  d.dim = dim;
  d.validate();
  return d;
}

NoiseDistribution NoiseDistribution::levy(int dim) {
  NoiseDistribution d;
  d.family = NoiseFamily::Levy;
  d.dim = dim;
  d.validate();
  return d;
}

NoiseDistribution NoiseDistribution::from_name(const std::string& name, int dim) {
  NoiseDistribution d;
  d.family = family_from_name(name);
  d.dim = dim;
  d.validate();
  return d;
}

void NoiseDistribution::validate() const {
  if (dim < 1) throw std::invalid_argument("noise: dim must be >= 1");
  if (!(scale > 0.0)) throw std::invalid_argument("noise: scale must be > 0");
  switch (family) {
    case NoiseFamily::Uniform:
      if (!(lo <= hi)) throw std::invalid_argument("uniform: endpoints out of order");
      break;
    case NoiseFamily::Exponential:
      if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
      break;
    case NoiseFamily::Rayleigh:
      if (!(sigma > 0.0)) throw std::invalid_argument("rayleigh: sigma must be > 0");
      break;
    case NoiseFamily::Pareto:
      if (!(shape > 0.0)) throw std::invalid_argument("pareto: shape must be > 0");
      break;
    default:
      break;
  }
}

namespace {

double draw_one(const NoiseDistribution& d, Rng& rng) {
  switch (d.family) {
    case NoiseFamily::Gaussian:
      // covariance (1/sqrt(dim)) I, so per-coordinate std is dim^(-1/4)
      return rng.normal() * std::pow(static_cast<double>(d.dim), -0.25);
    case NoiseFamily::Uniform:
      return rng.uniform(d.lo, d.hi);
    case NoiseFamily::Exponential:
      return rng.exponential(d.rate) - 1.0 / d.rate;  // centered
    case NoiseFamily::Rayleigh:
      return rng.rayleigh(d.sigma) - d.sigma * std::sqrt(M_PI / 2.0);  // centered
    case NoiseFamily::Pareto:
      return rng.pareto(d.shape);
    case NoiseFamily::Cauchy:
      return rng.cauchy();
    case NoiseFamily::Levy:
      return rng.levy();
  }
  return 0.0;
}

}  // namespace

std::vector<double> sample(const NoiseDistribution& dist, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  dist.validate();
  Rng rng(seed);
  std::vector<double> out(n * static_cast<std::size_t>(dist.dim));
  for (double& v : out) v = dist.scale * draw_one(dist, rng);
  return out;
}

namespace {

// E||u|| of the unscaled distribution, where a closed form exists.
// Returns NaN when only an empirical estimate is available.
double analytic_expected_norm(const NoiseDistribution& d) {
  switch (d.family) {
    case NoiseFamily::Gaussian: {
      // ||u|| = dim^(-1/4) * chi(dim); E chi(d) = sqrt(2) Gamma((d+1)/2)/Gamma(d/2)
      const double dd = static_cast<double>(d.dim);
      const double echi =
          std::sqrt(2.0) * std::exp(std::lgamma((dd + 1.0) / 2.0) - std::lgamma(dd / 2.0));
      return std::pow(dd, -0.25) * echi;
    }
    case NoiseFamily::Uniform: {
      if (d.dim != 1) return std::numeric_limits<double>::quiet_NaN();
      if (d.lo == d.hi) return std::fabs(d.lo);
      if (d.lo >= 0.0 || d.hi <= 0.0) return 0.5 * std::fabs(d.lo + d.hi);
      return (d.lo * d.lo + d.hi * d.hi) / (2.0 * (d.hi - d.lo));
    }
    case NoiseFamily::Exponential:
      // E|X - 1/rate| = 2/(rate*e) for X ~ Exp(rate)
      if (d.dim != 1) return std::numeric_limits<double>::quiet_NaN();
      return 2.0 / (d.rate * std::exp(1.0));
    default:
      return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

NoiseDistribution normalize_unit_expectation(const NoiseDistribution& dist, std::size_t n_cal,
                                             std::uint64_t seed) {
  NoiseDistribution out = dist;
  if (!family_is_light_tailed(dist.family)) {
    out.heavy_passthrough = true;  // E||u|| may be infinite; leave unscaled
    return out;
  }
  double e_norm = analytic_expected_norm(dist);
  if (!std::isfinite(e_norm)) {
    if (n_cal < 2) throw std::invalid_argument("normalize: n_cal too small");
    const auto panel = sample(dist, n_cal, seed);
    double s = 0.0;
    const auto d = static_cast<std::size_t>(dist.dim);
    for (std::size_t i = 0; i < n_cal; ++i) {
      double nn = 0.0;
      for (std::size_t j = 0; j < d; ++j) nn += panel[i * d + j] * panel[i * d + j];
      s += std::sqrt(nn);
    }
    e_norm = s / static_cast<double>(n_cal) / dist.scale;
  }
  if (!(e_norm > 0.0)) {
    // degenerate distribution (e.g. uniform on [0,0]); nothing to normalize
    out.unit_norm = true;
    return out;
  }
  out.scale = dist.scale / e_norm;
  out.unit_norm = true;
  return out;
}

TailClass classify_tail(const NoiseDistribution& dist) {
  TailClass t;
  t.analytic = true;
  t.label = family_is_light_tailed(dist.family) ? TailLabel::Light : TailLabel::Heavy;
  return t;
}

TailClass empirical_tail_test(std::span<const double> samples, const TailTestConfig& cfg) {
  if (samples.size() < cfg.min_samples)
    throw std::invalid_argument("empirical_tail_test: need >= " + std::to_string(cfg.min_samples) +
                                " samples");
  TailClass t;
  t.analytic = false;
  t.kurtosis = stats::excess_kurtosis(samples);
  double mx = 0.0;
  for (double v : samples) mx = std::max(mx, std::fabs(v));
  if (mx == 0.0) {
    // constant-zero input: flat, trivially light
    t.hill_index = std::numeric_limits<double>::infinity();
    t.label = TailLabel::Light;
    return t;
  }
  t.hill_index = stats::hill_tail_index(samples, cfg.tail_fraction);
  const bool light = t.kurtosis <= cfg.kurtosis_bound && t.hill_index >= cfg.hill_cutoff;
  t.label = light ? TailLabel::Light : TailLabel::Heavy;
  return t;
}

}  // namespace igo
