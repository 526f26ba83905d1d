#include "kappa/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "kappa/closed_form.hpp"
#include "kappa/rng.hpp"

namespace kappa {

namespace {

struct Pair {
  double x;
  double y;
};

Pair correlated_normals(RandomStream& rng, double theta) {
  const double z1 = rng.normal();
  const double z2 = rng.normal();
  return {z1, theta * z1 + std::sqrt(std::max(0.0, 1.0 - theta * theta)) * z2};
}

Pair correlated_uniforms(RandomStream& rng, double theta) {
  const double u = rng.uniform();
  if (theta == 1.0) return {u, u};
  if (theta == -1.0) return {u, 1.0 - u};
  const double alpha = 0.5 * (std::sqrt((49.0 + theta) / (1.0 + theta)) - 5.0);
  const double w = std::pow(rng.uniform(), 1.0 / alpha);  // Beta(alpha, 1)
  const double v = rng.uniform();
  const double y = (v < 0.5) ? std::fabs(w - u) : 1.0 - std::fabs(1.0 - w - u);
  return {u, y};
}

// GBED-I: Y | X = x has density (r - theta) e^{-ry} + theta r y e^{-ry}, r = 1 + theta x,
// a mixture of Exp(r) and Gamma(2, r).
Pair gbed(RandomStream& rng, double theta) {
  const double x = rng.exponential(1.0);
  const double r = 1.0 + theta * x;
  double y = rng.exponential(r);
  if (rng.uniform() * r < theta) y += rng.exponential(r);
  return {x, y};
}

// The two-rate recipe exactly as printed. At theta = 0 it gives Y ~ Exp(2).
Pair gbed_printed(RandomStream& rng, double theta) {
  const double x = rng.exponential(1.0);
  const double ex = std::exp(-x);
  const double e = (1.0 - theta + theta * x) * ex / (1.0 + theta * x);
  const double g = (theta + theta * theta * x) * ex / ((1.0 + theta * x) * (1.0 + theta * x));
  const double u = rng.uniform();
  const double y = (e / (e + g) < u) ? rng.exponential(1.0 + theta * x)
                                     : rng.exponential(2.0 + theta * x);
  return {x, y};
}

double logit(double u) {
  constexpr double lo = std::numeric_limits<double>::min();
  u = std::clamp(u, lo, 1.0 - std::numeric_limits<double>::epsilon() / 2.0);
  return std::log(u) - std::log1p(-u);
}

Pair draw(const FamilySpec& spec, RandomStream& rng) {
  const double t = spec.theta;
  switch (spec.family) {
    case Family::normal: {
      const Pair p = correlated_normals(rng, t);
      return {spec.sigma1 * p.x, spec.sigma2 * p.y};
    }
    case Family::uniform: return correlated_uniforms(rng, t);
    case Family::exponential: return gbed(rng, t);
    case Family::exponential_printed: return gbed_printed(rng, t);
    case Family::laplace: {
      // Each coordinate gets its own mixing weight, so theta = 0 is independence.
      const Pair p = correlated_normals(rng, t);
      const double sx = std::sqrt(rng.exponential(1.0));
      const double sy = std::sqrt(rng.exponential(1.0));
      return {sx * p.x, sy * p.y};
    }
    case Family::laplace_shared: {
      const double s = std::sqrt(rng.exponential(1.0));
      const Pair p = correlated_normals(rng, t);
      return {s * p.x, s * p.y};
    }
    case Family::logistic: {
      const Pair p = correlated_uniforms(rng, t);
      return {logit(p.x), logit(p.y)};
    }
    case Family::chisquare: {
      const Pair p = correlated_normals(rng, t);
      return {p.x * p.x, p.y * p.y};
    }
  }
  return {0.0, 0.0};
}

void require_unit_open(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw Error(ErrorCode::domain_error, "quantile level must lie in (0, 1)");
  }
}

constexpr double kLaplaceScale = 1.0 / std::numbers::sqrt2;

}  // namespace

PairedSample sample_family(const FamilySpec& spec, std::int64_t n, SeedSpec seed) {
  spec.validate();
  if (n <= 0) throw Error(ErrorCode::n_nonpositive, "n must be positive");
  if (n == 1) throw Error(ErrorCode::sample_too_small, "a paired sample needs n >= 2");
  RandomStream rng(seed);
  std::vector<double> xs(static_cast<std::size_t>(n));
  std::vector<double> ys(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Pair p = draw(spec, rng);
    xs[i] = p.x;
    ys[i] = p.y;
  }
  return PairedSample(std::move(xs), std::move(ys));
}

double marginal_quantile(const FamilySpec& spec, Coordinate coordinate, double u) {
  require_unit_open(u);
  switch (spec.family) {
    case Family::normal:
      return (coordinate == Coordinate::x ? spec.sigma1 : spec.sigma2) * normal_quantile(u);
    case Family::uniform: return u;
    case Family::exponential: return -std::log1p(-u);
    case Family::exponential_printed:
      if (coordinate == Coordinate::x) return -std::log1p(-u);
      break;
    case Family::laplace:
    case Family::laplace_shared:
      return u < 0.5 ? kLaplaceScale * std::log(2.0 * u) : -kLaplaceScale * std::log(2.0 * (1.0 - u));
    case Family::logistic: return std::log(u) - std::log1p(-u);
    case Family::chisquare: {
      const double z = normal_quantile(0.5 + 0.5 * u);
      return z * z;
    }
  }
  throw Error(ErrorCode::unsupported_family, "no closed-form y marginal for exponential-printed");
}

double marginal_cdf(const FamilySpec& spec, Coordinate coordinate, double v) {
  switch (spec.family) {
    case Family::normal:
      return normal_cdf(v / (coordinate == Coordinate::x ? spec.sigma1 : spec.sigma2));
    case Family::uniform: return std::clamp(v, 0.0, 1.0);
    case Family::exponential: return v <= 0.0 ? 0.0 : -std::expm1(-v);
    case Family::exponential_printed:
      if (coordinate == Coordinate::x) return v <= 0.0 ? 0.0 : -std::expm1(-v);
      break;
    case Family::laplace:
    case Family::laplace_shared:
      return v < 0.0 ? 0.5 * std::exp(v / kLaplaceScale) : 1.0 - 0.5 * std::exp(-v / kLaplaceScale);
    case Family::logistic: return 1.0 / (1.0 + std::exp(-v));
    case Family::chisquare: return v <= 0.0 ? 0.0 : std::erf(std::sqrt(v / 2.0));
  }
  throw Error(ErrorCode::unsupported_family, "no closed-form y marginal for exponential-printed");
}

}  // namespace kappa
