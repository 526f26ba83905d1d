#pragma once

// Small helpers shared by the test binaries.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <vector>

#include "kappa/family.hpp"
#include "kappa/rng.hpp"
#include "kappa/samplers.hpp"

namespace kappa::testing {

inline constexpr std::array<Family, 6> kSixFamilies = {Family::normal,   Family::uniform,
                                                       Family::exponential, Family::laplace,
                                                       Family::logistic, Family::chisquare};

inline double rel_err(double a, double b) {
  if (a == b) return 0.0;
  return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b));
}

/// A family from the six with theta uniform over its legal range.
inline FamilySpec random_family(RandomStream& rng) {
  FamilySpec f;
  f.family = kSixFamilies[rng.below(kSixFamilies.size())];
  const double lo = theta_lower_bound(f.family);
  f.theta = lo + (1.0 - lo) * rng.uniform();
  return f;
}

inline std::vector<double> normals(RandomStream& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace kappa::testing
