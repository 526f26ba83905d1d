#include "kappa/estimators.hpp"

#include <cmath>
#include <vector>

namespace kappa {

Estimator parse_estimator(std::string_view name) {
  if (name == "star" || name == "kappa_star") return Estimator::kappa_star;
  if (name == "tilde" || name == "kappa_tilde") return Estimator::kappa_tilde;
  if (name == "hat" || name == "kappa_hat") return Estimator::kappa_hat;
  throw Error(ErrorCode::unknown_estimator, "unknown estimator '" + std::string(name) + "'");
}

std::string_view to_string(Estimator e) noexcept {
  switch (e) {
    case Estimator::kappa_star: return "kappa_star";
    case Estimator::kappa_tilde: return "kappa_tilde";
    case Estimator::kappa_hat: return "kappa_hat";
  }
  return "kappa_star";
}

// The combinations cancel heavily near independence, so they are formed in long double.
double kappa_star(const UStatBundle& u) noexcept {
  using L = long double;
  return static_cast<double>(0.25L * (L(u.u12) + L(u.u1) * L(u.u2) - 2.0L * L(u.u3)));
}

double kappa_tilde(const UStatBundle& u) noexcept {
  using L = long double;
  const L n = static_cast<L>(u.n);
  const L m = n - 1.0L;
  const L u12 = u.u12;
  const L u3 = u.u3;
  const L u1u2 = L(u.u1) * L(u.u2);
  const L star = u12 + u1u2 - 2.0L * u3;
  const L correction = -2.0L * n / (m * m) * u12 + 2.0L / (m * m) * u3 + 2.0L / m * u1u2;
  return static_cast<double>(0.25L * (star + correction));
}

double kappa_hat(const UStatBundle& u) noexcept {
  using L = long double;
  const L n = static_cast<L>(u.n);
  const L n2 = n * n;
  const L u12 = u.u12;
  const L u3 = u.u3;
  const L u1u2 = L(u.u1) * L(u.u2);
  const L star = u12 + u1u2 - 2.0L * u3;
  const L correction = (2.0L - 3.0L * n) / n2 * u12 - 2.0L * (2.0L - 3.0L * n) / n2 * u3 +
                       (1.0L - 2.0L * n) / n2 * u1u2;
  return static_cast<double>(0.25L * (star + correction));
}

double kappa_hat_vstat(const UStatBundle& u) noexcept {
  return 0.25 * (u.v12 - 2.0 * u.v3 + u.v1 * u.v2);
}

double evaluate(Estimator e, const UStatBundle& u) noexcept {
  switch (e) {
    case Estimator::kappa_star: return kappa_star(u);
    case Estimator::kappa_tilde: return kappa_tilde(u);
    case Estimator::kappa_hat: return kappa_hat(u);
  }
  return kappa_star(u);
}

double kappa_star(const PairedSample& sample) { return kappa_star(compute_ustats(sample)); }

KappaEstimates estimate_kappa(const PairedSample& sample, bool with_variance) {
  const UStatBundle u = compute_ustats(sample);
  KappaEstimates out;
  out.n = sample.size();
  out.kappa_star = kappa_star(u);
  out.kappa_tilde = kappa_tilde(u);
  out.kappa_hat = kappa_hat(u);
  if (with_variance) out.delta1_hat = delta1_plugin(sample);
  return out;
}

namespace {

// Row means A_i = n^{-1} sum_k |z_i - z_k| and grand mean B = n^{-1} sum_i A_i.
struct Centering {
  std::vector<double> row_mean;
  double grand_mean = 0.0;
};

Centering centering(std::span<const double> z) {
  const std::size_t n = z.size();
  Centering c;
  c.row_mean.resize(n);
  CompensatedSum total;
  for (std::size_t i = 0; i < n; ++i) {
    CompensatedSum row;
    for (std::size_t k = 0; k < n; ++k) row.add(std::fabs(z[i] - z[k]));
    c.row_mean[i] = row.value() / static_cast<double>(n);
    total.add(c.row_mean[i]);
  }
  c.grand_mean = total.value() / static_cast<double>(n);
  return c;
}

void require_pairs(const PairedSample& sample) {
  if (sample.size() < 2) throw Error(ErrorCode::sample_too_small, "need n >= 2");
}

}  // namespace

double kappa_tilde_direct(const PairedSample& sample) {
  require_pairs(sample);
  const std::size_t n = sample.size();
  const auto x = sample.xs();
  const auto y = sample.ys();
  const Centering cx = centering(x);
  const Centering cy = centering(y);
  const double f = static_cast<double>(n) / static_cast<double>(n - 1);
  CompensatedSum sum;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double hx = -0.5 * (std::fabs(x[i] - x[j]) - f * cx.row_mean[i] -
                                f * cx.row_mean[j] + f * cx.grand_mean);
      const double hy = -0.5 * (std::fabs(y[i] - y[j]) - f * cy.row_mean[i] -
                                f * cy.row_mean[j] + f * cy.grand_mean);
      sum.add(hx * hy);
    }
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return sum.value() / pairs;
}

double kappa_hat_direct(const PairedSample& sample) {
  require_pairs(sample);
  const std::size_t n = sample.size();
  const auto x = sample.xs();
  const auto y = sample.ys();
  const Centering cx = centering(x);
  const Centering cy = centering(y);
  CompensatedSum sum;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double hx = -0.5 * (std::fabs(x[i] - x[j]) - cx.row_mean[i] - cx.row_mean[j] +
                                cx.grand_mean);
      const double hy = -0.5 * (std::fabs(y[i] - y[j]) - cy.row_mean[i] - cy.row_mean[j] +
                                cy.grand_mean);
      sum.add(hx * hy);
    }
  }
  const double nd = static_cast<double>(n);
  return sum.value() / (nd * nd);
}

RhoEstimates rho_estimates(const PairedSample& sample) {
  const UStatBundle xy = compute_ustats(sample);
  const UStatBundle xx = compute_ustats(PairedSample({sample.xs().begin(), sample.xs().end()},
                                                     {sample.xs().begin(), sample.xs().end()}));
  const UStatBundle yy = compute_ustats(PairedSample({sample.ys().begin(), sample.ys().end()},
                                                     {sample.ys().begin(), sample.ys().end()}));
  const double hat_xx = kappa_hat(xx);
  const double hat_yy = kappa_hat(yy);
  const double tilde_xx = kappa_tilde(xx);
  const double tilde_yy = kappa_tilde(yy);
  if (!(hat_xx > 0.0 && hat_yy > 0.0 && tilde_xx > 0.0 && tilde_yy > 0.0)) {
    throw Error(ErrorCode::degenerate_marginal,
                "a marginal self-covariance is not positive (constant coordinate?)");
  }
  RhoEstimates r;
  r.rho_hat = kappa_hat(xy) / std::sqrt(hat_xx * hat_yy);
  r.rho_tilde = kappa_tilde(xy) / std::sqrt(tilde_xx * tilde_yy);
  return r;
}

double delta1_plugin(const PairedSample& sample) {
  if (sample.size() < 3) throw Error(ErrorCode::sample_too_small, "delta1 needs n >= 3");
  const std::size_t n = sample.size();
  const double nd = static_cast<double>(n);
  const auto x = sample.xs();
  const auto y = sample.ys();

  // g1_i = n^{-1} sum_j |x_i - x_j|, g2 likewise, g12_i = n^{-1} sum_j |dx||dy|.
  std::vector<double> g1(n);
  std::vector<double> g2(n);
  std::vector<double> g12(n);
  for (std::size_t i = 0; i < n; ++i) {
    CompensatedSum s1;
    CompensatedSum s2;
    CompensatedSum s12;
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = std::fabs(x[i] - x[j]);
      const double dy = std::fabs(y[i] - y[j]);
      s1.add(dx);
      s2.add(dy);
      s12.add(dx * dy);
    }
    g1[i] = s1.value() / nd;
    g2[i] = s2.value() / nd;
    g12[i] = s12.value() / nd;
  }
  CompensatedSum m1;
  CompensatedSum m2;
  for (std::size_t i = 0; i < n; ++i) {
    m1.add(g1[i]);
    m2.add(g2[i]);
  }
  const double mu1 = m1.value() / nd;
  const double mu2 = m2.value() / nd;

  // Conditional terms E[|X' - x||Y' - Y''| | x] = n^{-1} sum_j |x - x_j| g2_j and
  // the mirror image in y.
  std::vector<double> proj(n);
  CompensatedSum mean_proj;
  for (std::size_t i = 0; i < n; ++i) {
    CompensatedSum cx;
    CompensatedSum cy;
    for (std::size_t j = 0; j < n; ++j) {
      cx.add(std::fabs(x[i] - x[j]) * g2[j]);
      cy.add(std::fabs(y[i] - y[j]) * g1[j]);
    }
    proj[i] = g12[i] + mu1 * g2[i] + mu2 * g1[i] - cx.value() / nd - cy.value() / nd -
              g1[i] * g2[i];
    mean_proj.add(proj[i]);
  }
  const double centre = mean_proj.value() / nd;
  CompensatedSum ss;
  for (double p : proj) ss.add((p - centre) * (p - centre));
  return 0.25 * ss.value() / nd;
}

}  // namespace kappa
