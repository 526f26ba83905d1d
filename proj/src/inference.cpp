#include "kappa/inference.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "kappa/closed_form.hpp"
#include "kappa/parallel.hpp"
#include "kappa/rng.hpp"
#include "kappa/samplers.hpp"
#include "kappa/spectral.hpp"

namespace kappa {

TestMethod parse_method(std::string_view name) {
  if (name == "permutation") return TestMethod::permutation;
  if (name == "asymptotic" || name == "asymptotic_null") return TestMethod::asymptotic_null;
  throw Error(ErrorCode::invalid_argument, "unknown test method '" + std::string(name) + "'");
}

std::string_view to_string(TestMethod m) noexcept {
  return m == TestMethod::permutation ? "permutation" : "asymptotic_null";
}

PermutationEngine::PermutationEngine(const PairedSample& sample) : n_(sample.size()) {
  if (n_ < 3) throw Error(ErrorCode::sample_too_small, "independence test needs n >= 3");
  const auto x = sample.xs();
  const auto y = sample.ys();
  dx_.assign(n_ * n_, 0.0);
  dy_.assign(n_ * n_, 0.0);
  a_.assign(n_, 0.0);
  b_.assign(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      dx_[i * n_ + j] = std::fabs(x[i] - x[j]);
      dy_[i * n_ + j] = std::fabs(y[i] - y[j]);
    }
  }
  CompensatedSum sx;
  CompensatedSum sy;
  for (std::size_t i = 0; i < n_; ++i) {
    CompensatedSum ra;
    CompensatedSum rb;
    for (std::size_t j = 0; j < n_; ++j) {
      ra.add(dx_[i * n_ + j]);
      rb.add(dy_[i * n_ + j]);
    }
    a_[i] = ra.value();
    b_[i] = rb.value();
    sx.add(a_[i]);
    sy.add(b_[i]);
  }
  sum_x_ = 0.5 * sx.value();
  sum_y_ = 0.5 * sy.value();
}

UStatBundle PermutationEngine::bundle(const std::vector<std::size_t>& perm) const {
  double pair_xy = 0.0;
  double row_ab = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const double* dxr = dx_.data() + i * n_;
    const double* dyr = dy_.data() + perm[i] * n_;
    double row = 0.0;
    for (std::size_t j = i + 1; j < n_; ++j) row += dxr[j] * dyr[perm[j]];
    pair_xy += row;
    row_ab += a_[i] * b_[perm[i]];
  }
  return bundle_from_sums(n_, sum_x_, sum_y_, pair_xy, row_ab);
}

UStatBundle PermutationEngine::observed() const {
  std::vector<std::size_t> id(n_);
  std::iota(id.begin(), id.end(), std::size_t{0});
  return bundle(id);
}

namespace {

constexpr std::array<Estimator, 3> kAllEstimators = {Estimator::kappa_star, Estimator::kappa_tilde,
                                                     Estimator::kappa_hat};

// The limit law is simulated, and fewer than 1000 draws give p-values too coarse to use.
void check_limit_draws(const TestOptions& options) {
  if (options.method == TestMethod::asymptotic_null && options.B_or_R < 1000) {
    throw Error(ErrorCode::invalid_argument, "asymptotic_null needs R >= 1000 limit draws");
  }
}

void check_options(const PairedSample& sample, const TestOptions& options) {
  if (sample.size() < 3) throw Error(ErrorCode::sample_too_small, "independence test needs n >= 3");
  if (options.B_or_R < 99) throw Error(ErrorCode::invalid_argument, "B_or_R must be >= 99");
  check_limit_draws(options);
}

std::array<TestResult, 3> permutation_tests(const PairedSample& sample, SeedSpec seed,
                                            std::size_t B) {
  const PermutationEngine engine(sample);
  const std::size_t n = engine.size();
  const UStatBundle obs = engine.observed();
  std::array<double, 3> observed{};
  for (std::size_t e = 0; e < 3; ++e) observed[e] = evaluate(kAllEstimators[e], obs);
  // Permutations that reproduce the observed pairing can differ from it by a
  // few ulps because the summation order changes; treat those as ties.
  const double slack = 1e-12 * (std::fabs(obs.u12) + obs.u1 * obs.u2 + std::fabs(obs.u3));

  std::array<std::size_t, 3> at_least{};
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  RandomStream rng(seed);
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    const UStatBundle u = engine.bundle(perm);
    for (std::size_t e = 0; e < 3; ++e) {
      if (evaluate(kAllEstimators[e], u) >= observed[e] - slack) ++at_least[e];
    }
  }
  std::array<TestResult, 3> out;
  for (std::size_t e = 0; e < 3; ++e) {
    out[e].statistic_name = kAllEstimators[e];
    out[e].statistic = observed[e];
    out[e].method = TestMethod::permutation;
    out[e].p_value = (1.0 + static_cast<double>(at_least[e])) / (static_cast<double>(B) + 1.0);
    out[e].n = n;
    out[e].B_or_R = B;
    out[e].seed = seed;
  }
  return out;
}

std::array<TestResult, 3> asymptotic_tests(const PairedSample& sample, SeedSpec seed,
                                           const TestOptions& options) {
  const UStatBundle u = compute_ustats(sample);
  const std::size_t n = sample.size();
  const EigenSpectrum lx = kernel_eigenvalues(empirical_marginal(sample.xs()), options.k);
  const EigenSpectrum ly = kernel_eigenvalues(empirical_marginal(sample.ys()), options.k);
  const auto models = null_limit_models(lx, ly, options.k, options.B_or_R, seed, options.threads);
  std::array<TestResult, 3> out;
  for (std::size_t e = 0; e < 3; ++e) {
    const Estimator est = kAllEstimators[e];
    const double stat = static_cast<double>(n) * evaluate(est, u);
    const NullLimitModel& model = est == Estimator::kappa_hat ? models.second : models.first;
    out[e].statistic_name = est;
    out[e].statistic = stat;
    out[e].method = TestMethod::asymptotic_null;
    out[e].p_value = null_pvalue(model, stat);
    out[e].n = n;
    out[e].B_or_R = options.B_or_R;
    out[e].seed = seed;
  }
  return out;
}

}  // namespace

std::array<TestResult, 3> independence_tests(const PairedSample& sample, SeedSpec seed,
                                             const TestOptions& options) {
  check_options(sample, options);
  if (options.method == TestMethod::permutation) {
    return permutation_tests(sample, seed, options.B_or_R);
  }
  return asymptotic_tests(sample, seed, options);
}

TestResult independence_test(const PairedSample& sample, Estimator estimator, SeedSpec seed,
                             const TestOptions& options) {
  const auto all = independence_tests(sample, seed, options);
  return all[static_cast<std::size_t>(estimator)];
}

PowerReport power_study(const std::vector<FamilySpec>& grid, std::size_t n,
                        std::size_t replicates, double alpha, std::uint64_t master,
                        const TestOptions& options) {
  if (replicates < 100) throw Error(ErrorCode::invalid_argument, "replicates must be >= 100");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::invalid_argument, "alpha in (0, 1)");
  if (grid.empty()) throw Error(ErrorCode::invalid_argument, "empty family grid");
  if (options.B_or_R < 99) throw Error(ErrorCode::invalid_argument, "B_or_R must be >= 99");
  check_limit_draws(options);
  for (const auto& f : grid) f.validate();

  const std::size_t cells = grid.size() * replicates;
  std::vector<std::array<char, 3>> rejected(cells);
  TestOptions inner = options;
  inner.threads = 1;
  parallel_for(cells, options.threads, [&](std::size_t idx) {
    const std::size_t g = idx / replicates;
    const std::size_t r = idx % replicates;
    const SeedSpec rep{master, r};
    const PairedSample s = sample_family(grid[g], static_cast<std::int64_t>(n), rep);
    const auto tests = independence_tests(s, rep.child(g + 1), inner);
    for (std::size_t e = 0; e < 3; ++e) rejected[idx][e] = tests[e].p_value <= alpha ? 1 : 0;
  });

  PowerReport report;
  report.grid = grid;
  report.n = n;
  report.replicates = replicates;
  report.alpha = alpha;
  report.method = options.method;
  report.B_or_R = options.B_or_R;
  report.master_seed = master;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (std::size_t e = 0; e < 3; ++e) {
      std::size_t count = 0;
      for (std::size_t r = 0; r < replicates; ++r) count += rejected[g * replicates + r][e];
      PowerCell c;
      c.family = grid[g];
      c.estimator = kAllEstimators[e];
      c.power = static_cast<double>(count) / static_cast<double>(replicates);
      c.mc_stderr = std::sqrt(c.power * (1.0 - c.power) / static_cast<double>(replicates));
      report.cells.push_back(c);
    }
  }
  return report;
}

double ks_distance_normal(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::invalid_argument, "empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = normal_cdf(values[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double anderson_darling_normal(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::invalid_argument, "empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  constexpr double floor = 1e-300;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = std::max(normal_cdf(values[i]), floor);
    const double hi = std::max(normal_cdf(-values[n - 1 - i]), floor);
    s += (2.0 * static_cast<double>(i) + 1.0) * (std::log(lo) + std::log(hi));
  }
  return -static_cast<double>(n) - s / static_cast<double>(n);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::invalid_argument, "empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

NormalityReport normality_diagnostic(const FamilySpec& family,
                                     const std::vector<std::size_t>& n_grid,
                                     std::size_t replicates, std::uint64_t master,
                                     unsigned threads) {
  if (family.family != Family::normal && family.family != Family::exponential) {
    throw Error(ErrorCode::unsupported_family,
                "normality diagnostic needs a closed-form kappa (normal or exponential)");
  }
  if (replicates < 2) throw Error(ErrorCode::invalid_argument, "replicates must be >= 2");
  NormalityReport report;
  report.family = family;
  report.kappa = kappa_closed_form(family);
  report.replicates = replicates;

  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    const std::size_t n = n_grid[gi];
    if (n < 3) throw Error(ErrorCode::sample_too_small, "normality diagnostic needs n >= 3");
    std::vector<std::array<double, 3>> est(replicates);
    std::vector<double> delta(replicates);
    parallel_for(replicates, threads, [&](std::size_t r) {
      const PairedSample s =
          sample_family(family, static_cast<std::int64_t>(n), SeedSpec{master, r}.child(gi));
      const KappaEstimates k = estimate_kappa(s, true);
      est[r] = {k.kappa_star, k.kappa_tilde, k.kappa_hat};
      delta[r] = *k.delta1_hat;
    });
    const double rn = std::sqrt(static_cast<double>(n));
    const double R = static_cast<double>(replicates);
    for (std::size_t e = 0; e < 3; ++e) {
      std::vector<double> z(replicates);
      CompensatedSum zsum;
      CompensatedSum bias;
      CompensatedSum sq;
      for (std::size_t r = 0; r < replicates; ++r) {
        const double err = est[r][e] - report.kappa;
        z[r] = rn * err / std::sqrt(delta[r]);
        zsum.add(z[r]);
        bias.add(err);
        sq.add(err * err);
      }
      const double zm = zsum.value() / R;
      CompensatedSum zv;
      for (double v : z) zv.add((v - zm) * (v - zm));
      NormalityCell c;
      c.n = n;
      c.estimator = kAllEstimators[e];
      c.z_mean = zm;
      c.z_variance = zv.value() / (R - 1.0);
      c.ks = ks_distance_normal(z);
      c.anderson_darling = anderson_darling_normal(z);
      c.bias = bias.value() / R;
      c.rmse_sqrt_n = rn * std::sqrt(sq.value() / R);
      report.cells.push_back(c);
    }
  }
  return report;
}

std::vector<TimingReport> timing_benchmark(const std::vector<Estimator>& estimators,
                                           std::size_t n, std::size_t evals,
                                           const FamilySpec& family, std::uint64_t master) {
  if (evals < 10) throw Error(ErrorCode::invalid_argument, "evals must be >= 10");
  if (n < 3) throw Error(ErrorCode::sample_too_small, "timing needs n >= 3");
  constexpr std::size_t repetitions = 10;
  std::vector<TimingReport> out;
  volatile double sink = 0.0;
  for (std::size_t ei = 0; ei < estimators.size(); ++ei) {
    std::vector<double> seconds(repetitions);
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
      std::vector<PairedSample> samples;
      samples.reserve(evals);
      for (std::size_t i = 0; i < evals; ++i) {
        samples.push_back(sample_family(family, static_cast<std::int64_t>(n),
                                        SeedSpec{master, rep * evals + i}));
      }
      const auto start = std::chrono::steady_clock::now();
      for (const auto& s : samples) sink = sink + evaluate(estimators[ei], compute_ustats(s));
      const auto stop = std::chrono::steady_clock::now();
      seconds[rep] = std::chrono::duration<double>(stop - start).count();
    }
    const double mean = std::accumulate(seconds.begin(), seconds.end(), 0.0) / repetitions;
    double ss = 0.0;
    for (double s : seconds) ss += (s - mean) * (s - mean);
    TimingReport t;
    t.estimator = estimators[ei];
    t.n = n;
    t.evals = evals;
    t.mean_seconds = mean;
    t.sd_seconds = std::sqrt(ss / (repetitions - 1));
    out.push_back(t);
  }
  return out;
}

namespace {

std::string fmt(double v, int prec) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

}  // namespace

void write_power_table(const PowerReport& report, std::ostream& out) {
  out << "Estimated power, n = " << report.n << ", replicates = " << report.replicates
      << ", alpha = " << report.alpha << ", " << to_string(report.method) << " ("
      << report.B_or_R << ")\n";
  // One block per family; columns are theta values in grid order.
  std::vector<Family> families;
  for (const auto& f : report.grid) {
    if (std::find(families.begin(), families.end(), f.family) == families.end()) {
      families.push_back(f.family);
    }
  }
  for (Family fam : families) {
    std::vector<std::size_t> cols;
    for (std::size_t g = 0; g < report.grid.size(); ++g) {
      if (report.grid[g].family == fam) cols.push_back(g);
    }
    out << '\n' << std::left << std::setw(14) << to_string(fam);
    for (std::size_t g : cols) out << std::right << std::setw(10) << ("t=" + fmt(report.grid[g].theta, 2));
    out << '\n';
    for (std::size_t e = 0; e < 3; ++e) {
      out << std::left << std::setw(14) << to_string(kAllEstimators[e]);
      for (std::size_t g : cols) out << std::right << std::setw(10) << fmt(report.cells[g * 3 + e].power, 3);
      out << '\n';
    }
  }
}

void write_timing_table(const std::vector<TimingReport>& reports, std::ostream& out) {
  out << std::left << std::setw(14) << "estimator" << std::right << std::setw(8) << "n"
      << std::setw(8) << "evals" << std::setw(14) << "mean (s)" << std::setw(14) << "sd (s)"
      << '\n';
  for (const auto& r : reports) {
    out << std::left << std::setw(14) << to_string(r.estimator) << std::right << std::setw(8)
        << r.n << std::setw(8) << r.evals << std::setw(14) << fmt(r.mean_seconds, 6)
        << std::setw(14) << fmt(r.sd_seconds, 6) << '\n';
  }
}

void write_normality_table(const NormalityReport& report, std::ostream& out) {
  out << to_string(report.family.family) << " theta = " << report.family.theta
      << ", kappa = " << report.kappa << ", replicates = " << report.replicates << '\n';
  out << std::right << std::setw(6) << "n" << ' ' << std::left << std::setw(12) << "estimator"
      << std::right << std::setw(10) << "z mean" << std::setw(10) << "z var" << std::setw(8)
      << "KS" << std::setw(8) << "AD" << std::setw(12) << "bias" << std::setw(12)
      << "rmse*sqrtn" << '\n';
  for (const auto& c : report.cells) {
    out << std::right << std::setw(6) << c.n << ' ' << std::left << std::setw(12)
        << to_string(c.estimator) << std::right << std::setw(10) << fmt(c.z_mean, 4)
        << std::setw(10) << fmt(c.z_variance, 4) << std::setw(8) << fmt(c.ks, 4) << std::setw(8)
        << fmt(c.anderson_darling, 3) << std::setw(12) << fmt(c.bias, 6) << std::setw(12)
        << fmt(c.rmse_sqrt_n, 5) << '\n';
  }
}

}  // namespace kappa
