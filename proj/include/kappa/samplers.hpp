#pragma once

#include <cstdint>

#include "kappa/core.hpp"
#include "kappa/family.hpp"

namespace kappa {

enum class Coordinate { x, y };

/// n i.i.d. pairs from the family, drawn sequentially from substream(seed).
/// Throws ThetaOutOfRange, NOnPositive for n <= 0 and SampleTooSmall for
/// n == 1 (a PairedSample holds at least two pairs).
[[nodiscard]] PairedSample sample_family(const FamilySpec& spec, std::int64_t n, SeedSpec seed);

/// Inverse CDF of one marginal. Laplace is the scale mixture sqrt(W) Z with
/// W ~ Exp(1), i.e. Laplace(0, 1/sqrt(2)). The y marginal of
/// exponential-printed has no closed form and raises UnsupportedFamily.
[[nodiscard]] double marginal_quantile(const FamilySpec& spec, Coordinate coordinate, double u);

/// Marginal CDF matching marginal_quantile; used by goodness-of-fit checks.
[[nodiscard]] double marginal_cdf(const FamilySpec& spec, Coordinate coordinate, double v);

}  // namespace kappa
