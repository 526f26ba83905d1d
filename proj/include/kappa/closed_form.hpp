#pragma once

#include "kappa/core.hpp"
#include "kappa/family.hpp"

namespace kappa {

/// mu1 = E|X - X'|, mu2 = E|Y - Y'|, mu3 = E[g1(X) g2(Y)], mu12 = E|X - X'||Y - Y'|.
/// kappa = (mu12 - 2 mu3 + mu1 mu2) / 4.
struct PopulationMoments {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double mu3 = 0.0;
  double mu12 = 0.0;

  [[nodiscard]] double kappa() const noexcept { return 0.25 * (mu12 - 2.0 * mu3 + mu1 * mu2); }
};

/// G(x) = int_1^inf e^{-xt}/t dt, i.e. the exponential integral E1(x).
/// Power series for x <= 1, Lentz continued fraction above. DomainError for x <= 0.
[[nodiscard]] double exp_integral_G(double x);

/// e^x G(x), evaluated without forming e^x so it stays finite for large x.
[[nodiscard]] double exp_integral_G_scaled(double x);

/// kappa(theta) for GBED-I, theta in [0, 1]. Exactly 0 at theta = 0.
[[nodiscard]] double kappa_gbed(double theta);

/// d kappa / d theta for GBED-I, theta in (0, 1].
[[nodiscard]] double kappa_gbed_derivative(double theta);

/// kappa(theta) for the bivariate normal with correlation theta in [-1, 1].
[[nodiscard]] double kappa_bvn(double theta, double sigma1 = 1.0, double sigma2 = 1.0);

/// d kappa / d theta for the bivariate normal, theta in [-1, 1].
[[nodiscard]] double kappa_bvn_derivative(double theta, double sigma1 = 1.0, double sigma2 = 1.0);

/// Second derivative for the bivariate normal; theta in (-1, 1). Nonnegative.
[[nodiscard]] double kappa_bvn_second_derivative(double theta, double sigma1 = 1.0,
                                                 double sigma2 = 1.0);

[[nodiscard]] PopulationMoments bvn_moments(double theta, double sigma1 = 1.0,
                                            double sigma2 = 1.0);

/// Closed-form kappa for the families that have one (normal, exponential).
/// UnsupportedFamily otherwise.
[[nodiscard]] double kappa_closed_form(const FamilySpec& family);

/// kappa as int int [F12(x,y) - F1(x) F2(y)]^2 dx dy by nested adaptive
/// Gauss-Kronrod quadrature over a truncated box. Normal and exponential only.
[[nodiscard]] double kappa_quadrature_oracle(const FamilySpec& family,
                                             const NumericConfig& config = {});

[[nodiscard]] double normal_cdf(double z) noexcept;
[[nodiscard]] double normal_quantile(double p);

/// P(X <= x, Y <= y) for a standard bivariate normal with correlation rho.
/// Drezner-Wesolowsky/Genz Gauss-Legendre scheme, ~1e-15 absolute.
[[nodiscard]] double bivariate_normal_cdf(double x, double y, double rho);

/// F12(x, y) - Phi(x) Phi(y) without forming both terms, so relative accuracy
/// survives deep in the tails for |rho| < 0.925.
[[nodiscard]] double bivariate_normal_excess(double x, double y, double rho);

}  // namespace kappa
