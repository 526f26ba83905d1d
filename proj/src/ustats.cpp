#include "kappa/ustats.hpp"

#include <cmath>
#include <vector>

namespace kappa {

namespace {

void require_triples(const PairedSample& sample) {
  if (sample.size() < 3) {
    throw Error(ErrorCode::sample_too_small,
                "U-statistics need n >= 3, got n = " + std::to_string(sample.size()));
  }
}

// Symmetrised kernel for mu3: average of |x_a - x_b||y_a - y_c| over the six
// orderings of the triple.
double h3(const PairedSample& s, std::size_t i, std::size_t j, std::size_t k) {
  const auto x = s.xs();
  const auto y = s.ys();
  const double xij = std::fabs(x[i] - x[j]);
  const double xik = std::fabs(x[i] - x[k]);
  const double xjk = std::fabs(x[j] - x[k]);
  const double yij = std::fabs(y[i] - y[j]);
  const double yik = std::fabs(y[i] - y[k]);
  const double yjk = std::fabs(y[j] - y[k]);
  return (xij * yik + xij * yjk + xik * yij + xjk * yij + xik * yjk + xjk * yik) / 6.0;
}

}  // namespace

UStatBundle bundle_from_sums(std::size_t n, double pair_sum_x, double pair_sum_y,
                             double pair_sum_xy, double row_product_sum) {
  const double nd = static_cast<double>(n);
  const double pairs = nd * (nd - 1.0) / 2.0;
  const double ordered_triples = nd * (nd - 1.0) * (nd - 2.0);
  UStatBundle b;
  b.n = n;
  b.u1 = pair_sum_x / pairs;
  b.u2 = pair_sum_y / pairs;
  b.u12 = pair_sum_xy / pairs;
  // The distinct-index part of sum_i a_i b_i; clamp rounding below zero.
  const double distinct = row_product_sum - 2.0 * pair_sum_xy;
  b.u3 = distinct > 0.0 ? distinct / ordered_triples : 0.0;
  b.v1 = 2.0 * pair_sum_x / (nd * nd);
  b.v2 = 2.0 * pair_sum_y / (nd * nd);
  b.v12 = 2.0 * pair_sum_xy / (nd * nd);
  b.v3 = row_product_sum / (nd * nd * nd);
  return b;
}

UStatBundle compute_ustats(const PairedSample& sample) {
  require_triples(sample);
  const std::size_t n = sample.size();
  const auto x = sample.xs();
  const auto y = sample.ys();
  std::vector<CompensatedSum> a(n);
  std::vector<CompensatedSum> b(n);
  CompensatedSum pair_xy;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = std::fabs(x[i] - x[j]);
      const double dy = std::fabs(y[i] - y[j]);
      a[i].add(dx);
      a[j].add(dx);
      b[i].add(dy);
      b[j].add(dy);
      pair_xy.add(dx * dy);
    }
  }
  CompensatedSum sum_a;
  CompensatedSum sum_b;
  CompensatedSum sum_ab;
  for (std::size_t i = 0; i < n; ++i) {
    const double ai = a[i].value();
    const double bi = b[i].value();
    sum_a.add(ai);
    sum_b.add(bi);
    sum_ab.add(ai * bi);
  }
  return bundle_from_sums(n, 0.5 * sum_a.value(), 0.5 * sum_b.value(), pair_xy.value(),
                          sum_ab.value());
}

UStatBundle compute_ustats_bruteforce(const PairedSample& sample) {
  require_triples(sample);
  const std::size_t n = sample.size();
  const auto x = sample.xs();
  const auto y = sample.ys();
  const double nd = static_cast<double>(n);

  CompensatedSum s1;
  CompensatedSum s2;
  CompensatedSum s12;
  CompensatedSum v1;
  CompensatedSum v2;
  CompensatedSum v12;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = std::fabs(x[i] - x[j]);
      const double dy = std::fabs(y[i] - y[j]);
      v1.add(dx);
      v2.add(dy);
      v12.add(dx * dy);
      if (i < j) {
        s1.add(dx);
        s2.add(dy);
        s12.add(dx * dy);
      }
    }
  }
  CompensatedSum s3;
  CompensatedSum v3;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const double h = h3(sample, i, j, k);
        v3.add(h);
        if (i < j && j < k) s3.add(h);
      }
    }
  }
  const double pairs = nd * (nd - 1.0) / 2.0;
  const double triples = nd * (nd - 1.0) * (nd - 2.0) / 6.0;
  UStatBundle b;
  b.n = n;
  b.u1 = s1.value() / pairs;
  b.u2 = s2.value() / pairs;
  b.u12 = s12.value() / pairs;
  b.u3 = s3.value() / triples;
  b.v1 = v1.value() / (nd * nd);
  b.v2 = v2.value() / (nd * nd);
  b.v12 = v12.value() / (nd * nd);
  b.v3 = v3.value() / (nd * nd * nd);
  return b;
}

}  // namespace kappa
