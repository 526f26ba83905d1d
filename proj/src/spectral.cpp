#include "kappa/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "kappa/parallel.hpp"
#include "kappa/rng.hpp"
#include "kappa/ustats.hpp"

namespace kappa {

void DiscreteMarginal::validate() const {
  if (points.size() != probs.size()) {
    throw Error(ErrorCode::invalid_argument, "points and probs differ in length");
  }
  if (points.size() < 2) throw Error(ErrorCode::degenerate_grid, "need at least two points");
  CompensatedSum total;
  for (std::size_t m = 0; m < points.size(); ++m) {
    if (!std::isfinite(points[m])) throw Error(ErrorCode::invalid_argument, "non-finite point");
    if (!(probs[m] > 0.0)) throw Error(ErrorCode::invalid_argument, "probabilities must be > 0");
    if (m > 0 && !(points[m] > points[m - 1])) {
      throw Error(ErrorCode::degenerate_grid,
                  "points must be strictly increasing (index " + std::to_string(m) + ")");
    }
    total.add(probs[m]);
  }
  if (std::fabs(total.value() - 1.0) > 1e-12) {
    throw Error(ErrorCode::invalid_argument, "probabilities do not sum to 1");
  }
}

DiscreteMarginal discretize_marginal(const std::function<double(double)>& quantile,
                                     std::size_t t) {
  if (t < 3) throw Error(ErrorCode::sample_too_small, "discretization needs t >= 3");
  DiscreteMarginal d;
  d.points.resize(t);
  d.probs.assign(t, 1.0 / static_cast<double>(t));
  for (std::size_t m = 0; m < t; ++m) {
    d.points[m] = quantile((static_cast<double>(m) + 0.5) / static_cast<double>(t));
    if (!std::isfinite(d.points[m])) {
      throw Error(ErrorCode::non_monotone_quantile, "quantile returned a non-finite value");
    }
    if (m > 0 && !(d.points[m] > d.points[m - 1])) {
      throw Error(ErrorCode::non_monotone_quantile,
                  "quantile not strictly increasing at grid index " + std::to_string(m));
    }
  }
  return d;
}

DiscreteMarginal empirical_marginal(std::span<const double> values) {
  if (values.size() < 3) throw Error(ErrorCode::sample_too_small, "need at least 3 values");
  std::map<double, std::size_t> counts;
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "non-finite value");
    ++counts[v];
  }
  if (counts.size() < 2) throw Error(ErrorCode::all_values_equal, "all values are equal");
  DiscreteMarginal d;
  const double n = static_cast<double>(values.size());
  for (const auto& [v, c] : counts) {
    d.points.push_back(v);
    d.probs.push_back(static_cast<double>(c) / n);
  }
  return d;
}

namespace {

// Half the mean absolute difference, via sorted prefix sums.
double half_mean_abs_difference(const DiscreteMarginal& d) {
  CompensatedSum total;
  CompensatedSum mass_below;
  CompensatedSum first_moment_below;
  for (std::size_t m = 0; m < d.size(); ++m) {
    // Each unordered pair once; the factor 1/2 cancels the double count.
    total.add(d.probs[m] * (d.points[m] * mass_below.value() - first_moment_below.value()));
    mass_below.add(d.probs[m]);
    first_moment_below.add(d.probs[m] * d.points[m]);
  }
  return total.value();
}

EigenSpectrum finish(std::vector<double> lambdas, const DiscreteMarginal& d, std::size_t k_max) {
  std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
  EigenSpectrum s;
  s.t = d.size();
  s.trace_target = half_mean_abs_difference(d);
  CompensatedSum sum;
  for (double l : lambdas) sum.add(l);
  s.lambda_sum = sum.value();
  if (lambdas.size() > k_max) lambdas.resize(k_max);
  s.lambdas = std::move(lambdas);
  if (s.lambdas.empty()) throw Error(ErrorCode::empty_spectrum, "no positive eigenvalues");
  return s;
}

}  // namespace

EigenSpectrum kernel_eigenvalues(const DiscreteMarginal& marginal, std::size_t k_max,
                                 const NumericConfig& config) {
  marginal.validate();
  config.validate();
  if (k_max < 1) throw Error(ErrorCode::invalid_argument, "k_max must be >= 1");
  const std::size_t t = marginal.size();
  if (t < 3) throw Error(ErrorCode::sample_too_small, "need t >= 3 support points");

  // C is the path-graph Laplacian with edge weights c_m = 1 / (x_m - x_{m-1}).
  std::vector<double> c(t, 0.0);
  for (std::size_t m = 1; m < t; ++m) {
    const double gap = marginal.points[m] - marginal.points[m - 1];
    c[m] = 1.0 / gap;
    if (!std::isfinite(c[m])) throw Error(ErrorCode::degenerate_grid, "zero gap between points");
  }
  Eigen::VectorXd diag(static_cast<Eigen::Index>(t));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(t - 1));
  for (std::size_t m = 0; m < t; ++m) {
    const double left = c[m];
    const double right = (m + 1 < t) ? c[m + 1] : 0.0;
    diag[static_cast<Eigen::Index>(m)] = (left + right) / marginal.probs[m];
    if (m + 1 < t) {
      sub[static_cast<Eigen::Index>(m)] =
          -c[m + 1] / std::sqrt(marginal.probs[m] * marginal.probs[m + 1]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::domain_error, "tridiagonal eigen-solver did not converge");
  }
  const Eigen::VectorXd& mu = solver.eigenvalues();  // ascending
  const double mu_max = mu[mu.size() - 1];
  std::vector<double> lambdas;
  lambdas.reserve(t - 1);
  // Index 0 is the constant mode sqrt(p), whose exact eigenvalue is 0.
  for (Eigen::Index i = 1; i < mu.size(); ++i) {
    if (mu[i] > config.eig_zero_tol * mu_max) lambdas.push_back(1.0 / mu[i]);
  }
  return finish(std::move(lambdas), marginal, k_max);
}

EigenSpectrum dense_kernel_eigenvalues(const DiscreteMarginal& marginal, std::size_t k_max,
                                       const NumericConfig& config) {
  marginal.validate();
  config.validate();
  if (k_max < 1) throw Error(ErrorCode::invalid_argument, "k_max must be >= 1");
  const std::size_t t = marginal.size();
  const auto& x = marginal.points;
  const auto& p = marginal.probs;
  std::vector<double> g(t);
  for (std::size_t i = 0; i < t; ++i) {
    CompensatedSum s;
    for (std::size_t m = 0; m < t; ++m) s.add(p[m] * std::fabs(x[i] - x[m]));
    g[i] = s.value();
  }
  CompensatedSum gs;
  for (std::size_t i = 0; i < t; ++i) gs.add(p[i] * g[i]);
  const double g_mean = gs.value();

  const auto ti = static_cast<Eigen::Index>(t);
  Eigen::MatrixXd k(ti, ti);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      const double h = -0.5 * (std::fabs(x[i] - x[j]) - g[i] - g[j] + g_mean);
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::sqrt(p[i] * p[j]) * h;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::domain_error, "dense eigen-solver did not converge");
  }
  const Eigen::VectorXd& ev = solver.eigenvalues();
  const double top = ev[ev.size() - 1];
  std::vector<double> lambdas;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > config.eig_zero_tol * top) lambdas.push_back(ev[i]);
  }
  return finish(std::move(lambdas), marginal, k_max);
}

namespace {

struct WeightTable {
  std::vector<double> weights;  // lambda_i eta_j, row major, k_x * k_y
  double total = 0.0;           // sum of the weights
  double tail_mean = 0.0;       // mean of the omitted lambda_i eta_j Z^2 terms
};

WeightTable weight_table(const EigenSpectrum& lx, const EigenSpectrum& ly, std::size_t k) {
  if (lx.lambdas.empty() || ly.lambdas.empty()) {
    throw Error(ErrorCode::empty_spectrum, "null limit needs non-empty spectra");
  }
  if (k < 1) throw Error(ErrorCode::invalid_argument, "k must be >= 1");
  const std::size_t kx = std::min(k, lx.lambdas.size());
  const std::size_t ky = std::min(k, ly.lambdas.size());
  WeightTable w;
  w.weights.reserve(kx * ky);
  CompensatedSum total;
  for (std::size_t i = 0; i < kx; ++i) {
    for (std::size_t j = 0; j < ky; ++j) {
      w.weights.push_back(lx.lambdas[i] * ly.lambdas[j]);
      total.add(w.weights.back());
    }
  }
  w.total = total.value();
  w.tail_mean = std::max(0.0, lx.lambda_sum * ly.lambda_sum - w.total);
  return w;
}

std::vector<double> uncentered_draws(const WeightTable& w, std::size_t R, SeedSpec seed,
                                     unsigned threads) {
  if (R < 1000) throw Error(ErrorCode::invalid_argument, "null limit needs R >= 1000");
  std::vector<double> draws(R);
  const std::size_t m = w.weights.size();
  parallel_for(R, threads, [&](std::size_t r) {
    RandomStream rng(seed.child(r));
    double acc = 0.0;
    std::size_t i = 0;
    for (; i + 1 < m; i += 2) {
      const auto z = rng.chi_square1_pair();
      acc += w.weights[i] * z[0] + w.weights[i + 1] * z[1];
    }
    if (i < m) acc += w.weights[i] * rng.chi_square1_pair()[0];
    draws[r] = acc;
  });
  return draws;
}

}  // namespace

NullLimitModel null_limit_model(const EigenSpectrum& lx, const EigenSpectrum& ly, std::size_t k,
                                std::size_t R, SeedSpec seed, bool centered, unsigned threads) {
  auto both = null_limit_models(lx, ly, k, R, seed, threads);
  return centered ? std::move(both.first) : std::move(both.second);
}

std::pair<NullLimitModel, NullLimitModel> null_limit_models(const EigenSpectrum& lx,
                                                            const EigenSpectrum& ly,
                                                            std::size_t k, std::size_t R,
                                                            SeedSpec seed, unsigned threads) {
  const WeightTable w = weight_table(lx, ly, k);
  std::vector<double> raw = uncentered_draws(w, R, seed, threads);
  std::sort(raw.begin(), raw.end());

  NullLimitModel unc;
  unc.lambdas = lx;
  unc.etas = ly;
  unc.k = k;
  unc.centered = false;
  NullLimitModel cen = unc;
  cen.centered = true;
  cen.draws.resize(raw.size());
  for (std::size_t r = 0; r < raw.size(); ++r) cen.draws[r] = raw[r] - w.total;
  // Truncated terms have variance of order sum of squares of small weights;
  // only their mean matters for the uncentered law.
  for (double& d : raw) d += w.tail_mean;
  unc.draws = std::move(raw);
  return {std::move(cen), std::move(unc)};
}

double null_pvalue(const NullLimitModel& model, double statistic) {
  if (model.draws.empty()) throw Error(ErrorCode::empty_spectrum, "null model has no draws");
  const auto it = std::lower_bound(model.draws.begin(), model.draws.end(), statistic);
  const auto at_least = static_cast<double>(model.draws.end() - it);
  return (1.0 + at_least) / (static_cast<double>(model.draws.size()) + 1.0);
}

}  // namespace kappa
