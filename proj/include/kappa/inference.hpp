#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "kappa/core.hpp"
#include "kappa/estimators.hpp"
#include "kappa/family.hpp"

namespace kappa {

enum class TestMethod { permutation, asymptotic_null };

/// "permutation" or "asymptotic" / "asymptotic_null"; invalid_argument otherwise.
[[nodiscard]] TestMethod parse_method(std::string_view name);
[[nodiscard]] std::string_view to_string(TestMethod m) noexcept;

struct TestResult {
  Estimator statistic_name = Estimator::kappa_star;
  double statistic = 0.0;  ///< the estimate; n times the estimate for asymptotic_null
  TestMethod method = TestMethod::permutation;
  double p_value = 1.0;
  std::size_t n = 0;
  std::size_t B_or_R = 0;
  SeedSpec seed;
};

struct TestOptions {
  TestMethod method = TestMethod::permutation;
  std::size_t B_or_R = 999;
  std::size_t k = 100;  ///< eigenvalues per marginal for asymptotic_null
  unsigned threads = 1;
};

/// Permutation engine: pairwise |dx| and |dy| are computed once, after which
/// each permutation of y costs one O(n^2) pass for all three estimators.
class PermutationEngine {
 public:
  explicit PermutationEngine(const PairedSample& sample);

  /// Bundle for the pairing (x_i, y_{perm[i]}).
  [[nodiscard]] UStatBundle bundle(const std::vector<std::size_t>& perm) const;
  [[nodiscard]] UStatBundle observed() const;
  [[nodiscard]] std::size_t size() const noexcept { return n_; }

 private:
  std::size_t n_;
  std::vector<double> dx_;  // n x n
  std::vector<double> dy_;
  std::vector<double> a_;
  std::vector<double> b_;
  double sum_x_ = 0.0;
  double sum_y_ = 0.0;
};

/// One-sided upper-tail test of independence. Throws SampleTooSmall (n < 3),
/// invalid_argument (B_or_R < 99).
[[nodiscard]] TestResult independence_test(const PairedSample& sample, Estimator estimator,
                                           SeedSpec seed, const TestOptions& options = {});

/// All three estimators against the same permutations or null draws.
[[nodiscard]] std::array<TestResult, 3> independence_tests(const PairedSample& sample,
                                                           SeedSpec seed,
                                                           const TestOptions& options = {});

struct PowerCell {
  FamilySpec family;
  Estimator estimator = Estimator::kappa_star;
  double power = 0.0;
  double mc_stderr = 0.0;
};

struct PowerReport {
  std::vector<FamilySpec> grid;
  std::size_t n = 0;
  std::size_t replicates = 0;
  double alpha = 0.05;
  TestMethod method = TestMethod::permutation;
  std::size_t B_or_R = 0;
  std::uint64_t master_seed = 0;
  std::vector<PowerCell> cells;  ///< grid-major, then estimator
};

/// Replicate r samples with SeedSpec{master, r} for every grid entry (common
/// random numbers across theta) and draws its permutations from
/// SeedSpec{master, r}.child(g + 1). The report does not depend on `threads`.
/// Requires replicates >= 100.
[[nodiscard]] PowerReport power_study(const std::vector<FamilySpec>& grid, std::size_t n,
                                      std::size_t replicates, double alpha, std::uint64_t master,
                                      const TestOptions& options = {});

struct NormalityCell {
  std::size_t n = 0;
  Estimator estimator = Estimator::kappa_star;
  double z_mean = 0.0;      ///< mean of sqrt(n)(est - kappa)/sqrt(delta1_hat)
  double z_variance = 0.0;  ///< sample variance (denominator R - 1)
  double ks = 0.0;          ///< Kolmogorov-Smirnov distance to N(0, 1)
  double anderson_darling = 0.0;
  double bias = 0.0;        ///< mean(est) - kappa
  double rmse_sqrt_n = 0.0;
};

struct NormalityReport {
  FamilySpec family;
  double kappa = 0.0;
  std::size_t replicates = 0;
  std::vector<NormalityCell> cells;  ///< n-major, then estimator
};

/// UnsupportedFamily unless the family has a closed-form kappa.
[[nodiscard]] NormalityReport normality_diagnostic(const FamilySpec& family,
                                                   const std::vector<std::size_t>& n_grid,
                                                   std::size_t replicates, std::uint64_t master,
                                                   unsigned threads = 1);

struct TimingReport {
  Estimator estimator = Estimator::kappa_star;
  std::size_t n = 0;
  std::size_t evals = 0;
  double mean_seconds = 0.0;
  double sd_seconds = 0.0;
};

/// Ten repetitions of `evals` evaluations on fresh samples; sample generation
/// is not timed. Single-threaded. Requires evals >= 10.
[[nodiscard]] std::vector<TimingReport> timing_benchmark(const std::vector<Estimator>& estimators,
                                                         std::size_t n, std::size_t evals,
                                                         const FamilySpec& family,
                                                         std::uint64_t master);

/// Kolmogorov-Smirnov and Anderson-Darling distances of a sample to N(0, 1).
[[nodiscard]] double ks_distance_normal(std::vector<double> values);
[[nodiscard]] double anderson_darling_normal(std::vector<double> values);

/// Two-sample KS distance; both inputs need not be sorted.
[[nodiscard]] double ks_two_sample(std::vector<double> a, std::vector<double> b);

void write_power_table(const PowerReport& report, std::ostream& out);
void write_timing_table(const std::vector<TimingReport>& reports, std::ostream& out);
void write_normality_table(const NormalityReport& report, std::ostream& out);

}  // namespace kappa
