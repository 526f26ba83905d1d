#include "kappa/cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "kappa/closed_form.hpp"
#include "kappa/core.hpp"
#include "kappa/estimators.hpp"
#include "kappa/inference.hpp"
#include "kappa/samplers.hpp"
#include "kappa/serialize.hpp"
#include "kappa/spectral.hpp"

namespace kappa::cli {

namespace {

using nlohmann::ordered_json;

const std::vector<std::string> kFamilies = {"normal",   "uniform",  "exponential",
                                            "gbed",     "laplace",  "logistic",
                                            "chisquare", "chi-square", "exponential-printed",
                                            "laplace-shared"};
const std::vector<std::string> kEstimators = {"star", "tilde", "hat", "kappa_star",
                                              "kappa_tilde", "kappa_hat"};

struct Globals {
  std::string output = "json";
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void emit_json(std::ostream& out, const ordered_json& j) { out << j.dump(2) << '\n'; }

// --- estimate ---------------------------------------------------------------

struct EstimateArgs {
  std::string input;
  std::string estimator = "all";
  bool rho = false;
  bool variance = false;
};

void do_estimate(const Globals& g, const EstimateArgs& a, std::ostream& out) {
  const PairedSample s = load_sample(a.input);
  const KappaEstimates k = estimate_kappa(s, a.variance);
  std::optional<RhoEstimates> rho;
  if (a.rho) rho = rho_estimates(s);

  std::vector<std::pair<std::string, double>> rows;
  auto want = [&](Estimator e) { return a.estimator == "all" || parse_estimator(a.estimator) == e; };
  if (want(Estimator::kappa_star)) rows.emplace_back("kappa_star", k.kappa_star);
  if (want(Estimator::kappa_tilde)) rows.emplace_back("kappa_tilde", k.kappa_tilde);
  if (want(Estimator::kappa_hat)) rows.emplace_back("kappa_hat", k.kappa_hat);
  if (k.delta1_hat) rows.emplace_back("delta1_hat", *k.delta1_hat);
  if (rho) {
    rows.emplace_back("rho_hat", rho->rho_hat);
    rows.emplace_back("rho_tilde", rho->rho_tilde);
  }

  if (g.output == "json") {
    ordered_json j;
    for (const auto& [name, v] : rows) j[name] = v;
    j["n"] = k.n;
    emit_json(out, j);
  } else if (g.output == "csv") {
    for (std::size_t i = 0; i < rows.size(); ++i) out << rows[i].first << ',';
    out << "n\n";
    for (std::size_t i = 0; i < rows.size(); ++i) out << num(rows[i].second) << ',';
    out << k.n << '\n';
  } else {
    for (const auto& [name, v] : rows) out << std::left << std::setw(12) << name << num(v) << '\n';
    out << std::left << std::setw(12) << "n" << k.n << '\n';
  }
}

// --- test -------------------------------------------------------------------

std::size_t draws_or_default(std::size_t b, TestMethod method, std::size_t permutations) {
  if (b != 0) return b;
  return method == TestMethod::permutation ? permutations : 1000;
}

struct TestArgs {
  std::string input;
  std::string estimator = "star";
  std::string method = "permutation";
  std::size_t b = 0;  // 0 picks the method's default
  std::size_t k = 100;
};

void do_test(const Globals& g, const TestArgs& a, std::ostream& out) {
  const PairedSample s = load_sample(a.input);
  TestOptions opt;
  opt.method = parse_method(a.method);
  opt.B_or_R = draws_or_default(a.b, opt.method, 999);
  opt.k = a.k;
  opt.threads = g.threads;
  const TestResult r = independence_test(s, parse_estimator(a.estimator), SeedSpec{g.seed, 0}, opt);
  if (g.output == "json") {
    emit_json(out, to_json(r));
  } else if (g.output == "csv") {
    out << "statistic_name,statistic,method,p_value,n,B_or_R\n"
        << to_string(r.statistic_name) << ',' << num(r.statistic) << ',' << to_string(r.method)
        << ',' << num(r.p_value) << ',' << r.n << ',' << r.B_or_R << '\n';
  } else {
    out << std::left << std::setw(12) << "statistic" << to_string(r.statistic_name) << " = "
        << num(r.statistic) << '\n'
        << std::setw(12) << "method" << to_string(r.method) << " (" << r.B_or_R << ")\n"
        << std::setw(12) << "p_value" << num(r.p_value) << '\n'
        << std::setw(12) << "n" << r.n << '\n';
  }
}

// --- eigen ------------------------------------------------------------------

struct EigenArgs {
  std::string marginal = "uniform";
  std::string input;
  std::string column = "x";
  std::size_t t = 1000;
  std::size_t k = 100;
};

void do_eigen(const Globals& g, const EigenArgs& a, std::ostream& out) {
  DiscreteMarginal d;
  if (a.marginal == "empirical") {
    if (a.input.empty()) throw Error(ErrorCode::invalid_argument, "--marginal empirical needs --input");
    const PairedSample s = load_sample(a.input);
    d = empirical_marginal(a.column == "y" ? s.ys() : s.xs());
  } else {
    FamilySpec f;
    f.family = parse_family(a.marginal);
    d = discretize_marginal([&](double u) { return marginal_quantile(f, Coordinate::x, u); }, a.t);
  }
  const EigenSpectrum sp = kernel_eigenvalues(d, a.k);
  if (g.output == "json") {
    emit_json(out, to_json(sp));
  } else if (g.output == "csv") {
    out << "k,lambda\n";
    for (std::size_t i = 0; i < sp.lambdas.size(); ++i) out << i + 1 << ',' << num(sp.lambdas[i]) << '\n';
  } else {
    out << "t = " << sp.t << ", trace target = " << num(sp.trace_target)
        << ", sum of eigenvalues = " << num(sp.lambda_sum) << '\n';
    for (std::size_t i = 0; i < sp.lambdas.size(); ++i) {
      out << std::right << std::setw(5) << i + 1 << "  " << num(sp.lambdas[i]) << '\n';
    }
  }
}

// --- sample -----------------------------------------------------------------

struct SampleArgs {
  std::string family;
  double theta = 0.0;
  std::int64_t n = 100;
  std::string out_path;
};

void do_sample(const Globals& g, const SampleArgs& a, std::ostream& out) {
  FamilySpec f;
  f.family = parse_family(a.family);
  f.theta = a.theta;
  const PairedSample s = sample_family(f, a.n, SeedSpec{g.seed, 0});
  if (a.out_path.empty()) {
    write_sample(s, out);
  } else {
    write_sample(s, std::filesystem::path(a.out_path));
  }
}

// --- kappa-theta ------------------------------------------------------------

struct ThetaArgs {
  std::string family = "normal";
  double theta = 0.0;
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  bool oracle = false;
};

void do_kappa_theta(const Globals& g, const ThetaArgs& a, std::ostream& out) {
  FamilySpec f;
  f.family = parse_family(a.family);
  f.theta = a.theta;
  f.sigma1 = a.sigma1;
  f.sigma2 = a.sigma2;
  const double k = kappa_closed_form(f);
  std::optional<double> q;
  if (a.oracle) q = kappa_quadrature_oracle(f);
  if (g.output == "json") {
    ordered_json j = to_json(f);
    j["kappa"] = k;
    if (q) {
      j["oracle"] = *q;
      j["abs_difference"] = std::fabs(*q - k);
    }
    emit_json(out, j);
  } else if (g.output == "csv") {
    out << "family,theta,kappa" << (q ? ",oracle" : "") << '\n'
        << to_string(f.family) << ',' << num(f.theta) << ',' << num(k);
    if (q) out << ',' << num(*q);
    out << '\n';
  } else {
    out << num(k) << '\n';
    if (q) out << "oracle " << num(*q) << '\n';
  }
}

// --- power ------------------------------------------------------------------

struct PowerArgs {
  std::vector<std::string> families = {"normal"};
  std::vector<double> thetas = {0.0, 0.25, 0.5};
  std::size_t n = 100;
  std::size_t replicates = 1000;
  double alpha = 0.05;
  std::string method = "permutation";
  std::size_t b = 0;
  std::size_t k = 100;
};

void do_power(const Globals& g, const PowerArgs& a, std::ostream& out) {
  std::vector<FamilySpec> grid;
  for (const auto& name : a.families) {
    for (double t : a.thetas) {
      FamilySpec f;
      f.family = parse_family(name);
      f.theta = t;
      grid.push_back(f);
    }
  }
  TestOptions opt;
  opt.method = parse_method(a.method);
  opt.B_or_R = draws_or_default(a.b, opt.method, 199);
  opt.k = a.k;
  opt.threads = g.threads;
  const PowerReport r = power_study(grid, a.n, a.replicates, a.alpha, g.seed, opt);
  if (g.output == "json") {
    emit_json(out, to_json(r));
  } else if (g.output == "csv") {
    out << "family,theta,estimator,power,mc_stderr\n";
    for (const auto& c : r.cells) {
      out << to_string(c.family.family) << ',' << num(c.family.theta) << ','
          << to_string(c.estimator) << ',' << num(c.power) << ',' << num(c.mc_stderr) << '\n';
    }
  } else {
    write_power_table(r, out);
  }
}

// --- bench ------------------------------------------------------------------

struct BenchArgs {
  std::vector<std::string> estimators = {"star", "tilde", "hat"};
  std::size_t n = 100;
  std::size_t evals = 100;
  std::string family = "normal";
  double theta = 0.0;
};

void do_bench(const Globals& g, const BenchArgs& a, std::ostream& out) {
  std::vector<Estimator> est;
  for (const auto& e : a.estimators) est.push_back(parse_estimator(e));
  FamilySpec f;
  f.family = parse_family(a.family);
  f.theta = a.theta;
  const auto r = timing_benchmark(est, a.n, a.evals, f, g.seed);
  if (g.output == "json") {
    emit_json(out, to_json(r));
  } else if (g.output == "csv") {
    out << "estimator,n,evals,mean_seconds,sd_seconds\n";
    for (const auto& t : r) {
      out << to_string(t.estimator) << ',' << t.n << ',' << t.evals << ',' << num(t.mean_seconds)
          << ',' << num(t.sd_seconds) << '\n';
    }
  } else {
    write_timing_table(r, out);
  }
}

// --- normality --------------------------------------------------------------

struct NormalityArgs {
  std::string family = "normal";
  double theta = 0.5;
  std::vector<std::size_t> ns = {100, 400};
  std::size_t replicates = 1000;
};

void do_normality(const Globals& g, const NormalityArgs& a, std::ostream& out) {
  FamilySpec f;
  f.family = parse_family(a.family);
  f.theta = a.theta;
  const NormalityReport r = normality_diagnostic(f, a.ns, a.replicates, g.seed, g.threads);
  if (g.output == "json") {
    emit_json(out, to_json(r));
  } else if (g.output == "csv") {
    out << "n,estimator,z_mean,z_variance,ks,anderson_darling,bias,rmse_sqrt_n\n";
    for (const auto& c : r.cells) {
      out << c.n << ',' << to_string(c.estimator) << ',' << num(c.z_mean) << ','
          << num(c.z_variance) << ',' << num(c.ks) << ',' << num(c.anderson_darling) << ','
          << num(c.bias) << ',' << num(c.rmse_sqrt_n) << '\n';
    }
  } else {
    write_normality_table(r, out);
  }
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bergsma's kappa: estimators, null limits, samplers and power studies", "kappa"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Expand all help");

  Globals g;
  app.add_option("--output", g.output, "Output format")
      ->check(CLI::IsMember({"json", "table", "csv"}))
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Master seed for every random draw")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->capture_default_str();

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "kappa estimates for a two-column CSV");
  c_est->add_option("--input", est.input, "CSV file")->required()->check(CLI::ExistingFile);
  c_est->add_option("--estimator", est.estimator, "all, star, tilde or hat")
      ->check(CLI::IsMember({"all", "star", "tilde", "hat", "kappa_star", "kappa_tilde",
                             "kappa_hat"}));
  c_est->add_flag("--rho", est.rho, "Also report rho_hat and rho_tilde");
  c_est->add_flag("--variance", est.variance, "Also report the plug-in delta1");

  TestArgs test;
  auto* c_test = app.add_subcommand("test", "Test of independence");
  c_test->add_option("--input", test.input, "CSV file")->required()->check(CLI::ExistingFile);
  c_test->add_option("--estimator", test.estimator, "star, tilde or hat")
      ->check(CLI::IsMember(kEstimators))
      ->capture_default_str();
  c_test->add_option("--method", test.method, "permutation or asymptotic")
      ->check(CLI::IsMember({"permutation", "asymptotic", "asymptotic_null"}))
      ->capture_default_str();
  c_test->add_option("--b", test.b,
                     "Permutations (default 999), or null draws for asymptotic (default 1000)")
      ->check(CLI::Range(std::size_t{99}, std::size_t{100000000}));
  c_test->add_option("--k", test.k, "Eigenvalues per marginal (asymptotic)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  EigenArgs eig;
  auto* c_eig = app.add_subcommand("eigen", "Kernel eigenvalues of a marginal");
  c_eig->add_option("--marginal", eig.marginal, "Named marginal or 'empirical'")
      ->check(CLI::IsMember({"uniform", "normal", "exponential", "laplace", "logistic",
                             "chisquare", "empirical"}))
      ->capture_default_str();
  c_eig->add_option("--input", eig.input, "CSV file for --marginal empirical")
      ->check(CLI::ExistingFile);
  c_eig->add_option("--column", eig.column, "x or y (empirical)")
      ->check(CLI::IsMember({"x", "y"}))
      ->capture_default_str();
  c_eig->add_option("--t", eig.t, "Grid size")->check(CLI::Range(std::size_t{3}, std::size_t{200000}))
      ->capture_default_str();
  c_eig->add_option("--k", eig.k, "Eigenvalues to report")->check(CLI::PositiveNumber)
      ->capture_default_str();

  SampleArgs smp;
  auto* c_smp = app.add_subcommand("sample", "Draw a dependent sample as CSV");
  c_smp->add_option("--family", smp.family, "Family")->required()->check(CLI::IsMember(kFamilies));
  c_smp->add_option("--theta", smp.theta, "Dependence parameter")->required();
  c_smp->add_option("--n", smp.n, "Sample size")->capture_default_str();
  c_smp->add_option("--out", smp.out_path, "Output file (default stdout)");

  ThetaArgs th;
  auto* c_th = app.add_subcommand("kappa-theta", "Population kappa in closed form");
  c_th->add_option("--family", th.family, "normal or exponential")
      ->check(CLI::IsMember({"normal", "exponential", "gbed"}))
      ->capture_default_str();
  c_th->add_option("--theta", th.theta, "Dependence parameter")->required();
  c_th->add_option("--sigma1", th.sigma1, "Normal scale of x")->capture_default_str();
  c_th->add_option("--sigma2", th.sigma2, "Normal scale of y")->capture_default_str();
  c_th->add_flag("--oracle", th.oracle, "Cross-check by 2-D quadrature");

  PowerArgs pw;
  auto* c_pw = app.add_subcommand("power", "Monte Carlo power study");
  c_pw->add_option("--families", pw.families, "Comma-separated families")
      ->delimiter(',')
      ->check(CLI::IsMember(kFamilies))
      ->capture_default_str();
  c_pw->add_option("--thetas", pw.thetas, "Comma-separated theta values")
      ->delimiter(',')
      ->capture_default_str();
  c_pw->add_option("--n", pw.n, "Sample size")->check(CLI::Range(std::size_t{3}, std::size_t{1000000}))
      ->capture_default_str();
  c_pw->add_option("--replicates", pw.replicates, "Monte Carlo replicates")
      ->check(CLI::Range(std::size_t{100}, std::size_t{100000000}))
      ->capture_default_str();
  c_pw->add_option("--alpha", pw.alpha, "Level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  c_pw->add_option("--method", pw.method, "permutation or asymptotic")
      ->check(CLI::IsMember({"permutation", "asymptotic", "asymptotic_null"}))
      ->capture_default_str();
  c_pw->add_option("--b", pw.b,
                   "Permutations per test (default 199), or null draws for asymptotic (default 1000)")
      ->check(CLI::Range(std::size_t{99}, std::size_t{100000000}));
  c_pw->add_option("--k", pw.k, "Eigenvalues per marginal (asymptotic)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  BenchArgs bn;
  auto* c_bn = app.add_subcommand("bench", "Timing of the estimators");
  c_bn->add_option("--estimators", bn.estimators, "Comma-separated estimators")
      ->delimiter(',')
      ->check(CLI::IsMember(kEstimators))
      ->capture_default_str();
  c_bn->add_option("--n", bn.n, "Sample size")->check(CLI::Range(std::size_t{3}, std::size_t{1000000}))
      ->capture_default_str();
  c_bn->add_option("--evals", bn.evals, "Evaluations per repetition")
      ->check(CLI::Range(std::size_t{10}, std::size_t{100000000}))
      ->capture_default_str();
  c_bn->add_option("--family", bn.family, "Family the samples come from")
      ->check(CLI::IsMember(kFamilies))
      ->capture_default_str();
  c_bn->add_option("--theta", bn.theta, "Dependence parameter")->capture_default_str();

  NormalityArgs nm;
  auto* c_nm = app.add_subcommand("normality", "Standardized kappa estimates under dependence");
  c_nm->add_option("--family", nm.family, "normal or exponential")
      ->check(CLI::IsMember({"normal", "exponential", "gbed"}))
      ->capture_default_str();
  c_nm->add_option("--theta", nm.theta, "Dependence parameter")->capture_default_str();
  c_nm->add_option("--ns", nm.ns, "Comma-separated sample sizes")->delimiter(',')
      ->capture_default_str();
  c_nm->add_option("--replicates", nm.replicates, "Monte Carlo replicates")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}))
      ->capture_default_str();

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error[Usage]: " << one_line(e.what()) << '\n';
    return 2;
  }

  try {
    if (*c_est) do_estimate(g, est, out);
    else if (*c_test) do_test(g, test, out);
    else if (*c_eig) do_eigen(g, eig, out);
    else if (*c_smp) do_sample(g, smp, out);
    else if (*c_th) do_kappa_theta(g, th, out);
    else if (*c_pw) do_power(g, pw, out);
    else if (*c_bn) do_bench(g, bn, out);
    else if (*c_nm) do_normality(g, nm, out);
  } catch (const Error& e) {
    err << "error[" << to_string(e.code()) << "]: " << one_line(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error[Internal]: " << one_line(e.what()) << '\n';
    return 1;
  }
  return 0;
}

}  // namespace kappa::cli
