#pragma once

#include <cmath>
#include <cstddef>

#include "kappa/core.hpp"

namespace kappa {

/// Neumaier-compensated running sum. Deterministic for a fixed add order.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// The four U-statistics estimating mu1, mu2, mu12 and mu3, and the matching
/// V-statistics, for one paired sample.
struct UStatBundle {
  double u1 = 0.0;   ///< mean |x_i - x_j| over pairs i < j
  double u2 = 0.0;   ///< mean |y_i - y_j| over pairs i < j
  double u12 = 0.0;  ///< mean |x_i - x_j||y_i - y_j| over pairs i < j
  double u3 = 0.0;   ///< symmetrised three-point kernel averaged over triples
  double v1 = 0.0;
  double v2 = 0.0;
  double v12 = 0.0;
  double v3 = 0.0;
  std::size_t n = 0;
};

/// Assembles a bundle from the raw sums every O(n^2) pass produces:
/// pair sums over i < j of |dx|, |dy| and |dx||dy|, and sum_i a_i b_i with
/// a_i, b_i the absolute-difference row sums. Requires n >= 3.
[[nodiscard]] UStatBundle bundle_from_sums(std::size_t n, double pair_sum_x, double pair_sum_y,
                                           double pair_sum_xy, double row_product_sum);

/// O(n^2) evaluation through row sums. Throws SampleTooSmall for n < 3.
[[nodiscard]] UStatBundle compute_ustats(const PairedSample& sample);

/// Direct summation over all index pairs and triples; O(n^3), test oracle.
[[nodiscard]] UStatBundle compute_ustats_bruteforce(const PairedSample& sample);

}  // namespace kappa
