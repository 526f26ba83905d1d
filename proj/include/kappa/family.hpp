#pragma once

#include <string>
#include <string_view>

namespace kappa {

/// Parametric bivariate families with a scalar dependence parameter theta.
///
/// `exponential` is Gumbel's type-I bivariate exponential (GBED-I).
/// `exponential_printed` is an alternative generator that follows the
/// two-rate recipe literally; its y-marginal is not Exp(1) (see samplers).
/// `laplace_shared` is the elliptical Laplace, sqrt(W) times a correlated normal
/// pair with one W; unlike `laplace` it is dependent at theta = 0.
enum class Family {
  normal,
  uniform,
  exponential,
  laplace,
  logistic,
  chisquare,
  exponential_printed,
  laplace_shared
};

struct FamilySpec {
  Family family = Family::normal;
  double theta = 0.0;
  double sigma1 = 1.0;  ///< normal only
  double sigma2 = 1.0;  ///< normal only

  /// Throws ThetaOutOfRange (or DomainError for sigmas) when the parameters
  /// fall outside the family's legal range.
  void validate() const;
};

[[nodiscard]] Family parse_family(std::string_view name);
[[nodiscard]] std::string_view to_string(Family f) noexcept;

/// Lowest legal theta for the family (upper bound is always 1).
[[nodiscard]] double theta_lower_bound(Family f) noexcept;

}  // namespace kappa
