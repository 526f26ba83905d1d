#include "kappa/serialize.hpp"

#include <cmath>
#include <string>

namespace kappa {

using nlohmann::ordered_json;

ordered_json to_json(const SeedSpec& s) {
  return {{"master_seed", s.master_seed}, {"stream_index", s.stream_index}};
}

ordered_json to_json(const FamilySpec& f) {
  ordered_json j = {{"family", std::string(to_string(f.family))}, {"theta", f.theta}};
  if (f.family == Family::normal) {
    j["sigma1"] = f.sigma1;
    j["sigma2"] = f.sigma2;
  }
  return j;
}

ordered_json to_json(const UStatBundle& u) {
  return {{"u1", u.u1}, {"u2", u.u2}, {"u12", u.u12}, {"u3", u.u3}, {"v1", u.v1},
          {"v2", u.v2}, {"v12", u.v12}, {"v3", u.v3}, {"n", u.n}};
}

ordered_json to_json(const KappaEstimates& k) {
  ordered_json j = {{"kappa_star", k.kappa_star},
                    {"kappa_tilde", k.kappa_tilde},
                    {"kappa_hat", k.kappa_hat},
                    {"n", k.n}};
  if (k.delta1_hat) j["delta1_hat"] = *k.delta1_hat;
  return j;
}

ordered_json to_json(const RhoEstimates& r) {
  return {{"rho_hat", r.rho_hat}, {"rho_tilde", r.rho_tilde}};
}

ordered_json to_json(const PopulationMoments& m) {
  return {{"mu1", m.mu1}, {"mu2", m.mu2}, {"mu3", m.mu3}, {"mu12", m.mu12}};
}

ordered_json to_json(const EigenSpectrum& s) {
  return {{"lambdas", s.lambdas},
          {"t", s.t},
          {"trace_target", s.trace_target},
          {"lambda_sum", s.lambda_sum}};
}

ordered_json to_json(const NullLimitModel& m) {
  constexpr std::size_t grid = 1024;
  ordered_json q = ordered_json::array();
  const std::size_t R = m.draws.size();
  if (R > 0) {
    for (std::size_t i = 0; i < grid; ++i) {
      // Type-1 empirical quantile at level (i + 0.5) / grid.
      const double level = (static_cast<double>(i) + 0.5) / static_cast<double>(grid);
      auto idx = static_cast<std::size_t>(std::ceil(level * static_cast<double>(R)));
      idx = idx == 0 ? 0 : idx - 1;
      q.push_back(m.draws[std::min(idx, R - 1)]);
    }
  }
  return {{"lambdas", to_json(m.lambdas)},
          {"etas", to_json(m.etas)},
          {"k", m.k},
          {"centered", m.centered},
          {"R", R},
          {"quantile_levels", "(i + 0.5) / 1024"},
          {"quantiles", q}};
}

ordered_json to_json(const TestResult& t) {
  return {{"statistic_name", std::string(to_string(t.statistic_name))},
          {"statistic", t.statistic},
          {"method", std::string(to_string(t.method))},
          {"p_value", t.p_value},
          {"n", t.n},
          {"B_or_R", t.B_or_R},
          {"seed", to_json(t.seed)}};
}

ordered_json to_json(const PowerReport& p) {
  ordered_json cells = ordered_json::array();
  for (const auto& c : p.cells) {
    cells.push_back({{"family", to_json(c.family)},
                     {"estimator", std::string(to_string(c.estimator))},
                     {"power", c.power},
                     {"mc_stderr", c.mc_stderr}});
  }
  ordered_json grid = ordered_json::array();
  for (const auto& f : p.grid) grid.push_back(to_json(f));
  return {{"grid", grid},
          {"n", p.n},
          {"replicates", p.replicates},
          {"alpha", p.alpha},
          {"method", std::string(to_string(p.method))},
          {"B_or_R", p.B_or_R},
          {"master_seed", p.master_seed},
          {"cells", cells}};
}

ordered_json to_json(const NormalityReport& r) {
  ordered_json cells = ordered_json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"n", c.n},
                     {"estimator", std::string(to_string(c.estimator))},
                     {"z_mean", c.z_mean},
                     {"z_variance", c.z_variance},
                     {"ks", c.ks},
                     {"anderson_darling", c.anderson_darling},
                     {"bias", c.bias},
                     {"rmse_sqrt_n", c.rmse_sqrt_n}});
  }
  return {{"family", to_json(r.family)},
          {"kappa", r.kappa},
          {"replicates", r.replicates},
          {"cells", cells}};
}

ordered_json to_json(const TimingReport& t) {
  return {{"estimator", std::string(to_string(t.estimator))},
          {"n", t.n},
          {"evals", t.evals},
          {"mean_seconds", t.mean_seconds},
          {"sd_seconds", t.sd_seconds}};
}

ordered_json to_json(const std::vector<TimingReport>& t) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : t) arr.push_back(to_json(r));
  return arr;
}

}  // namespace kappa
