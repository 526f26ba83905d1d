#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "kappa/core.hpp"

namespace kappa {

/// Finite support x_1 < ... < x_t with probabilities p_m > 0 summing to 1.
struct DiscreteMarginal {
  std::vector<double> points;
  std::vector<double> probs;

  [[nodiscard]] std::size_t size() const noexcept { return points.size(); }

  /// Throws DegenerateGrid for repeated or unordered points and
  /// invalid_argument for bad probabilities.
  void validate() const;
};

/// Eigenvalues of the doubly centred distance kernel of a discrete marginal.
struct EigenSpectrum {
  std::vector<double> lambdas;  ///< descending, positive, truncated to k_max
  std::size_t t = 0;            ///< grid size of the marginal
  double trace_target = 0.0;    ///< half the mean absolute difference of the marginal
  double lambda_sum = 0.0;      ///< sum of every retained eigenvalue before truncation
};

/// Monte Carlo sample of sum_ij lambda_i eta_j (Z_ij^2 - 1) (centered) or
/// sum_ij lambda_i eta_j Z_ij^2, sorted ascending.
struct NullLimitModel {
  EigenSpectrum lambdas;
  EigenSpectrum etas;
  std::vector<double> draws;
  bool centered = true;
  std::size_t k = 0;
};

/// Points F^{-1}((m - 1/2) / t), weights 1/t. Throws SampleTooSmall for t < 3
/// and NonMonotoneQuantile if consecutive points fail to increase.
[[nodiscard]] DiscreteMarginal discretize_marginal(const std::function<double(double)>& quantile,
                                                   std::size_t t);

/// Distinct sorted values with multiplicity weights. Needs at least 3 values;
/// AllValuesEqual if only one distinct value remains.
[[nodiscard]] DiscreteMarginal empirical_marginal(std::span<const double> values);

/// Solves D_p g = lambda C g through the symmetric tridiagonal
/// M = D_p^{-1/2} C D_p^{-1/2}. The constant mode (smallest eigenvalue of M)
/// is always removed, as is anything with mu <= eig_zero_tol * mu_max.
[[nodiscard]] EigenSpectrum kernel_eigenvalues(const DiscreteMarginal& marginal,
                                               std::size_t k_max,
                                               const NumericConfig& config = {});

/// Dense oracle: eigenvalues of [sqrt(p_i p_j) h(x_i, x_j)]. O(t^3), t <= 200 or so.
[[nodiscard]] EigenSpectrum dense_kernel_eigenvalues(const DiscreteMarginal& marginal,
                                                     std::size_t k_max,
                                                     const NumericConfig& config = {});

/// R draws of the weighted chi-square limit from the top-k eigenvalues of
/// each spectrum. Replicate r uses substream(seed.child(r)), so the draws do
/// not depend on `threads`. Throws EmptySpectrum, invalid_argument for R < 1000.
[[nodiscard]] NullLimitModel null_limit_model(const EigenSpectrum& lx, const EigenSpectrum& ly,
                                              std::size_t k, std::size_t R, SeedSpec seed,
                                              bool centered, unsigned threads = 1);

/// Both laws from one set of chi-square draws: {centered, uncentered}. The
/// uncentered draws are shifted by the mean of the truncated terms,
/// lambda_sum(x) * lambda_sum(y) minus the retained weight total.
[[nodiscard]] std::pair<NullLimitModel, NullLimitModel> null_limit_models(
    const EigenSpectrum& lx, const EigenSpectrum& ly, std::size_t k, std::size_t R,
    SeedSpec seed, unsigned threads = 1);

/// (1 + #{draws >= statistic}) / (R + 1).
[[nodiscard]] double null_pvalue(const NullLimitModel& model, double statistic);

}  // namespace kappa
