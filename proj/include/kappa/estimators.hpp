#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "kappa/core.hpp"
#include "kappa/ustats.hpp"

namespace kappa {

enum class Estimator { kappa_star, kappa_tilde, kappa_hat };

/// Accepts "star", "tilde", "hat" and the long forms "kappa_star", ...
/// Throws UnknownEstimator otherwise.
[[nodiscard]] Estimator parse_estimator(std::string_view name);
[[nodiscard]] std::string_view to_string(Estimator e) noexcept;

struct KappaEstimates {
  double kappa_star = 0.0;
  double kappa_tilde = 0.0;
  double kappa_hat = 0.0;
  std::size_t n = 0;
  std::optional<double> delta1_hat;
};

struct RhoEstimates {
  double rho_hat = 0.0;
  double rho_tilde = 0.0;
};

// Production path: everything from one UStatBundle.

/// (U12 + U1 U2 - 2 U3) / 4.
[[nodiscard]] double kappa_star(const UStatBundle& u) noexcept;
/// Bergsma's U-type estimate expressed exactly through kappa_star.
[[nodiscard]] double kappa_tilde(const UStatBundle& u) noexcept;
/// Bergsma's V-type estimate expressed exactly through kappa_star.
[[nodiscard]] double kappa_hat(const UStatBundle& u) noexcept;
/// (V12 - 2 V3 + V1 V2) / 4, the V-statistic form of kappa_hat.
[[nodiscard]] double kappa_hat_vstat(const UStatBundle& u) noexcept;
[[nodiscard]] double evaluate(Estimator e, const UStatBundle& u) noexcept;

/// Sample-level conveniences; all require n >= 3.
[[nodiscard]] double kappa_star(const PairedSample& sample);
[[nodiscard]] KappaEstimates estimate_kappa(const PairedSample& sample, bool with_variance = false);

/// Bergsma's U-type estimate straight from its definition with the
/// n/(n-1)-corrected empirical kernels. Requires n >= 2. Independent of
/// compute_ustats.
[[nodiscard]] double kappa_tilde_direct(const PairedSample& sample);

/// Bergsma's V-type estimate as the double sum of empirical kernel products.
/// Requires n >= 2.
[[nodiscard]] double kappa_hat_direct(const PairedSample& sample);

/// rho_hat and rho_tilde. Self-covariances come from the samples (x, x) and
/// (y, y). Throws DegenerateMarginal if either is not strictly positive.
[[nodiscard]] RhoEstimates rho_estimates(const PairedSample& sample);

/// Plug-in estimate of the asymptotic variance delta_1 of sqrt(n)(kappa* - kappa):
/// one quarter of the population variance (denominator n) of the empirical
/// first projection. O(n^2).
[[nodiscard]] double delta1_plugin(const PairedSample& sample);

}  // namespace kappa
