#include "kappa/closed_form.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

namespace kappa {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kPi = std::numbers::pi;

// E1 by its power series; fine for 0 < x <= 1 where terms shrink fast.
double e1_series(double x) {
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= -x / k;
    const double add = -term / k;
    sum += add;
    if (std::fabs(add) <= 1e-17 * std::fabs(sum)) break;
  }
  return -kEulerGamma - std::log(x) + sum;
}

// e^x E1(x) for x > 1 by the modified Lentz continued fraction.
double e1_scaled_cf(double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double del = c * d;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h;
}

void require_positive(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::domain_error, "G(x) needs finite x > 0, got " + std::to_string(x));
  }
}

void require_gbed_theta(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw Error(ErrorCode::domain_error,
                "GBED-I theta must lie in [0, 1], got " + std::to_string(theta));
  }
}

void require_bvn(double theta, double s1, double s2, bool open) {
  const bool ok = open ? (theta > -1.0 && theta < 1.0) : (theta >= -1.0 && theta <= 1.0);
  if (!ok) {
    throw Error(ErrorCode::domain_error,
                "bivariate normal theta out of range: " + std::to_string(theta));
  }
  if (!(s1 > 0.0) || !(s2 > 0.0) || !std::isfinite(s1) || !std::isfinite(s2)) {
    throw Error(ErrorCode::domain_error, "sigma1 and sigma2 must be positive");
  }
}

// Small-theta expansion: kappa = sum_{k>=2} (-1)^k k! theta^k (2^-k / 4 - 4^-k / 2).
// Asymptotic, so only a few terms; used below 1e-3 where the closed form
// loses digits to cancellation.
double kappa_gbed_series(double theta) {
  double sum = 0.0;
  double fact = 1.0;
  double pow_t = 1.0;
  for (int k = 1; k <= 8; ++k) {
    fact *= k;
    pow_t *= theta;
    const double coef = 0.25 * std::pow(0.5, k) - 0.5 * std::pow(0.25, k);
    sum += ((k % 2 == 0) ? 1.0 : -1.0) * fact * pow_t * coef;
  }
  return sum;
}

}  // namespace

double exp_integral_G(double x) {
  require_positive(x);
  if (x <= 1.0) return e1_series(x);
  return std::exp(-x) * e1_scaled_cf(x);
}

double exp_integral_G_scaled(double x) {
  require_positive(x);
  if (x <= 1.0) return std::exp(x) * e1_series(x);
  return e1_scaled_cf(x);
}

double kappa_gbed(double theta) {
  require_gbed_theta(theta);
  if (theta == 0.0) return 0.0;
  if (theta < 1e-3) return kappa_gbed_series(theta);
  const double a = 2.0 / theta;
  return exp_integral_G_scaled(a) / (2.0 * theta) + 0.25 - a * exp_integral_G_scaled(2.0 * a);
}

double kappa_gbed_derivative(double theta) {
  require_gbed_theta(theta);
  if (theta == 0.0) throw Error(ErrorCode::domain_error, "derivative undefined at theta = 0");
  const double t2 = theta * theta;
  const double t3 = t2 * theta;
  return -1.5 / t2 + (8.0 / t3 + 2.0 / t2) * exp_integral_G_scaled(4.0 / theta) -
         (1.0 / t3 + 0.5 / t2) * exp_integral_G_scaled(2.0 / theta);
}

double kappa_bvn(double theta, double sigma1, double sigma2) {
  require_bvn(theta, sigma1, sigma2, false);
  if (theta == 0.0) return 0.0;
  const double bracket = theta * std::asin(theta) + std::sqrt(1.0 - theta * theta) + 1.0 -
                         theta * std::asin(theta / 2.0) - std::sqrt(4.0 - theta * theta);
  return sigma1 * sigma2 / kPi * bracket;
}

double kappa_bvn_derivative(double theta, double sigma1, double sigma2) {
  require_bvn(theta, sigma1, sigma2, false);
  return sigma1 * sigma2 / kPi * (std::asin(theta) - std::asin(theta / 2.0));
}

double kappa_bvn_second_derivative(double theta, double sigma1, double sigma2) {
  require_bvn(theta, sigma1, sigma2, true);
  return sigma1 * sigma2 / kPi *
         (1.0 / std::sqrt(1.0 - theta * theta) - 1.0 / std::sqrt(4.0 - theta * theta));
}

PopulationMoments bvn_moments(double theta, double sigma1, double sigma2) {
  require_bvn(theta, sigma1, sigma2, false);
  const double ss = sigma1 * sigma2;
  PopulationMoments m;
  m.mu1 = 2.0 * sigma1 / std::sqrt(kPi);
  m.mu2 = 2.0 * sigma2 / std::sqrt(kPi);
  m.mu3 = 2.0 * ss / kPi * (theta * std::asin(theta / 2.0) + std::sqrt(4.0 - theta * theta));
  m.mu12 = 4.0 * ss / kPi * (theta * std::asin(theta) + std::sqrt(1.0 - theta * theta));
  return m;
}

double kappa_closed_form(const FamilySpec& family) {
  family.validate();
  switch (family.family) {
    case Family::normal: return kappa_bvn(family.theta, family.sigma1, family.sigma2);
    case Family::exponential: return kappa_gbed(family.theta);
    default: break;
  }
  throw Error(ErrorCode::unsupported_family,
              "no closed-form kappa for family " + std::string(to_string(family.family)));
}

double kappa_quadrature_oracle(const FamilySpec& family, const NumericConfig& config) {
  family.validate();
  config.validate();
  using boost::math::quadrature::gauss_kronrod;
  const double outer_tol = config.quad_rel_tol;
  const double inner_tol = config.quad_rel_tol * 1e-2;
  constexpr unsigned depth = 15;

  if (family.family == Family::normal) {
    const double r = family.theta;
    constexpr double box = 9.0;
    auto outer = [&](double u) {
      auto inner = [&](double v) {
        const double d = bivariate_normal_excess(u, v, r);
        return d * d;
      };
      double err = 0.0;
      return gauss_kronrod<double, 31>::integrate(inner, -box, box, depth, inner_tol, &err);
    };
    double err = 0.0;
    const double val = gauss_kronrod<double, 31>::integrate(outer, -box, box, depth, outer_tol, &err);
    return family.sigma1 * family.sigma2 * val;
  }
  if (family.family == Family::exponential) {
    const double t = family.theta;
    constexpr double box = 40.0;
    auto outer = [&](double x) {
      auto inner = [&](double y) {
        const double base = std::exp(-(x + y));
        const double d = base * std::expm1(-t * x * y);
        return d * d;
      };
      double err = 0.0;
      return gauss_kronrod<double, 31>::integrate(inner, 0.0, box, depth, inner_tol, &err);
    };
    double err = 0.0;
    return gauss_kronrod<double, 31>::integrate(outer, 0.0, box, depth, outer_tol, &err);
  }
  throw Error(ErrorCode::unsupported_family,
              "quadrature oracle has no joint CDF for family " +
                  std::string(to_string(family.family)));
}

double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::domain_error, "normal quantile needs p in (0, 1)");
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

namespace {

// Upper orthant probability P(X > h, Y > k) for correlation r.
double bvn_upper(double h, double k, double r, bool excess_only = false) {
  static constexpr std::array<std::array<double, 10>, 3> w = {{
      {0.1713244923791705, 0.3607615730481384, 0.4679139345726904},
      {0.04717533638651177, 0.1069393259953183, 0.1600783285433464, 0.2031674267230659,
       0.2334925365383547, 0.2491470458134029},
      {0.01761400713915212, 0.04060142980038694, 0.06267204833410906, 0.08327674157670475,
       0.1019301198172404, 0.1181945319615184, 0.1316886384491766, 0.1420961093183821,
       0.1491729864726037, 0.1527533871307259},
  }};
  static constexpr std::array<std::array<double, 10>, 3> x = {{
      {-0.9324695142031522, -0.6612093864662647, -0.2386191860831970},
      {-0.9815606342467191, -0.9041172563704750, -0.7699026741943050, -0.5873179542866171,
       -0.3678314989981802, -0.1252334085114692},
      {-0.9931285991850949, -0.9639719272779138, -0.9122344282513259, -0.8391169718222188,
       -0.7463319064601508, -0.6360536807265150, -0.5108670019508271, -0.3737060887154196,
       -0.2277858511416451, -0.07652652113349733},
  }};
  constexpr double twopi = 2.0 * kPi;

  int ng = 2;
  int lg = 10;
  if (std::fabs(r) < 0.3) {
    ng = 0;
    lg = 3;
  } else if (std::fabs(r) < 0.75) {
    ng = 1;
    lg = 6;
  }

  double hk = h * k;
  double bvn = 0.0;
  if (std::fabs(r) < 0.925) {
    const double hs = (h * h + k * k) / 2.0;
    const double asr = std::asin(r);
    for (int i = 0; i < lg; ++i) {
      double sn = std::sin(asr * (x[ng][i] + 1.0) / 2.0);
      bvn += w[ng][i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      sn = std::sin(asr * (-x[ng][i] + 1.0) / 2.0);
      bvn += w[ng][i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
    }
    const double excess = bvn * asr / (2.0 * twopi);
    if (excess_only) return excess;
    return excess + normal_cdf(-h) * normal_cdf(-k);
  }

  if (r < 0.0) {
    k = -k;
    hk = -hk;
  }
  if (std::fabs(r) < 1.0) {
    const double as = (1.0 - r) * (1.0 + r);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    bvn = a * std::exp(-(bs / as + hk) / 2.0) *
          (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
    if (hk > -160.0) {
      const double b = std::sqrt(bs);
      bvn -= std::exp(-hk / 2.0) * std::sqrt(twopi) * normal_cdf(-b / a) * b *
             (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a /= 2.0;
    for (int i = 0; i < lg; ++i) {
      double xs = (a * (x[ng][i] + 1.0)) * (a * (x[ng][i] + 1.0));
      double rs = std::sqrt(1.0 - xs);
      bvn += a * w[ng][i] *
             (std::exp(-bs / (2.0 * xs) - hk / (1.0 + rs)) / rs -
              std::exp(-(bs / xs + hk) / 2.0) * (1.0 + c * xs * (1.0 + d * xs)));
      xs = as * (-x[ng][i] + 1.0) * (-x[ng][i] + 1.0) / 4.0;
      rs = std::sqrt(1.0 - xs);
      bvn += a * w[ng][i] * std::exp(-(bs / xs + hk) / 2.0) *
             (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs - (1.0 + c * xs * (1.0 + d * xs)));
    }
    bvn = -bvn / twopi;
  }
  double p = r > 0.0 ? bvn + normal_cdf(-std::max(h, k))
                     : -bvn + std::max(0.0, normal_cdf(-h) - normal_cdf(-k));
  if (excess_only) p -= normal_cdf(-h) * normal_cdf(r < 0.0 ? k : -k);
  return p;
}

}  // namespace

double bivariate_normal_cdf(double x, double y, double rho) {
  if (!(rho >= -1.0 && rho <= 1.0)) {
    throw Error(ErrorCode::domain_error, "correlation must lie in [-1, 1]");
  }
  if (std::isinf(x) || std::isinf(y)) {
    if (x == -std::numeric_limits<double>::infinity() ||
        y == -std::numeric_limits<double>::infinity()) {
      return 0.0;
    }
    if (std::isinf(x) && std::isinf(y)) return 1.0;
    return std::isinf(x) ? normal_cdf(y) : normal_cdf(x);
  }
  return std::clamp(bvn_upper(-x, -y, rho), 0.0, 1.0);
}

double bivariate_normal_excess(double x, double y, double rho) {
  if (!(rho >= -1.0 && rho <= 1.0)) {
    throw Error(ErrorCode::domain_error, "correlation must lie in [-1, 1]");
  }
  return bvn_upper(-x, -y, rho, true);
}

}  // namespace kappa
