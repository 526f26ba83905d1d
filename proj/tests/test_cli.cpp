#include <catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kappa/cli.hpp"
#include "kappa/core.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::StartsWith;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using nlohmann::json;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "kappa");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Outcome o;
  o.code = kappa::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("kappa_cli_" + name)).string();
}

std::string three_points() {
  const std::string path = temp_path("three.csv");
  std::ofstream(path) << "0,0\n1,1\n2,2\n";
  return path;
}

std::size_t lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("kappa-theta prints zero for independent normals") {
  const Outcome o = run({"--output", "table", "kappa-theta", "--family", "normal", "--theta", "0"});
  CHECK(o.code == 0);
  CHECK(o.out == "0\n");
  const Outcome j = run({"kappa-theta", "--family", "normal", "--theta", "0"});
  CHECK(json::parse(j.out)["kappa"] == 0.0);
}

TEST_CASE("kappa-theta with the quadrature cross-check") {
  const Outcome o =
      run({"kappa-theta", "--family", "exponential", "--theta", "0.5", "--oracle"});
  REQUIRE(o.code == 0);
  const json j = json::parse(o.out);
  CHECK_THAT(j["oracle"].get<double>(), WithinRel(j["kappa"].get<double>(), 1e-5));
}

TEST_CASE("estimate on three points") {
  const std::string path = three_points();
  const Outcome o = run({"estimate", "--input", path});
  REQUIRE(o.code == 0);
  const json j = json::parse(o.out);
  CHECK_THAT(j["kappa_star"].get<double>(), WithinRel(1.0 / 9.0, 1e-12));
  CHECK_THAT(j["kappa_tilde"].get<double>(), WithinRel(1.0 / 72.0, 1e-12));
  CHECK_THAT(j["kappa_hat"].get<double>(), WithinRel(10.0 / 81.0, 1e-12));

  const Outcome t = run({"--output", "table", "estimate", "--input", path});
  CHECK_THAT(t.out, ContainsSubstring("0.111111"));
  const Outcome c = run({"--output", "csv", "estimate", "--input", path});
  CHECK_THAT(c.out, StartsWith("kappa_star,"));
  CHECK(lines(c.out) == 2);
}

TEST_CASE("estimate with rho and variance") {
  const std::string path = temp_path("four.csv");
  std::ofstream(path) << "x,y\n0,1\n1,3\n2,2\n3,5\n";
  const Outcome o = run({"estimate", "--input", path, "--rho", "--variance"});
  REQUIRE(o.code == 0);
  CHECK_THAT(o.out, ContainsSubstring("rho_hat"));
  CHECK_THAT(o.out, ContainsSubstring("delta1_hat"));
}

TEST_CASE("power reproduces the normal row and ignores the worker count") {
  const std::vector<std::string> args = {"--output", "table", "power", "--families", "normal",
                                         "--thetas", "0,0.25,0.5", "--n", "100",
                                         "--replicates", "1000"};
  std::vector<std::string> one = args;
  one.insert(one.begin(), {"--threads", "1"});
  std::vector<std::string> three = args;
  three.insert(three.begin(), {"--threads", "3"});
  const Outcome a = run(one);
  const Outcome b = run(three);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  std::vector<std::string> js(args.begin() + 2, args.end());
  const Outcome j = run(js);
  REQUIRE(j.code == 0);
  const json report = json::parse(j.out);
  std::vector<double> star;
  for (const auto& cell : report["cells"]) {
    if (cell["estimator"] == "kappa_star") star.push_back(cell["power"].get<double>());
  }
  REQUIRE(star.size() == 3);
  CHECK_THAT(star[0], WithinAbs(0.06, 0.02));
  CHECK_THAT(star[1], WithinAbs(0.66, 0.05));
  CHECK(star[2] >= 0.99);
}

TEST_CASE("sample writes a readable file") {
  const std::string path = temp_path("sample.csv");
  const Outcome o = run({"--seed", "9", "sample", "--family", "chisquare", "--theta", "0.5", "--n",
                         "50", "--out", path});
  REQUIRE(o.code == 0);
  const kappa::PairedSample s = kappa::load_sample(path);
  CHECK(s.size() == 50);
  const Outcome again = run({"--seed", "9", "sample", "--family", "chisquare", "--theta", "0.5",
                             "--n", "50"});
  std::istringstream in(again.out);
  CHECK(kappa::parse_sample(in) == s);
}

TEST_CASE("eigen on a named marginal and on data") {
  const Outcome o = run({"eigen", "--marginal", "uniform", "--t", "1000", "--k", "5"});
  REQUIRE(o.code == 0);
  const json j = json::parse(o.out);
  REQUIRE(j["lambdas"].size() == 5);
  CHECK_THAT(j["lambdas"][0].get<double>(), WithinRel(0.101321, 1e-4));

  const Outcome e = run({"eigen", "--marginal", "empirical", "--input", three_points()});
  REQUIRE(e.code == 0);
  CHECK(json::parse(e.out)["lambdas"].size() == 2);
}

TEST_CASE("test subcommand with both methods") {
  const std::string path = temp_path("dep.csv");
  {
    std::ofstream f(path);
    for (int i = 0; i < 60; ++i) f << i << ',' << (i * 7) % 13 + i << '\n';
  }
  const Outcome p = run({"test", "--input", path, "--estimator", "star", "--b", "199"});
  REQUIRE(p.code == 0);
  CHECK(json::parse(p.out)["p_value"].get<double>() == 1.0 / 200.0);
  const Outcome a = run({"test", "--input", path, "--method", "asymptotic", "--k", "10"});
  REQUIRE(a.code == 0);
  const json j = json::parse(a.out);
  CHECK(j["method"] == "asymptotic_null");
  CHECK(j["B_or_R"] == 1000);
}

TEST_CASE("bench prints one row per estimator") {
  const Outcome o = run({"--output", "table", "bench", "--estimators", "star,hat", "--n", "50",
                         "--evals", "10"});
  REQUIRE(o.code == 0);
  CHECK(lines(o.out) == 3);
}

TEST_CASE("normality subcommand") {
  const Outcome o = run({"normality", "--family", "normal", "--theta", "0.5", "--ns", "50",
                         "--replicates", "50"});
  REQUIRE(o.code == 0);
  CHECK(json::parse(o.out)["cells"].size() == 3);
}

TEST_CASE("usage errors exit 2 with one line") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {},
           {"estimate"},
           {"kappa-theta", "--family", "laplace", "--theta", "0.2"},
           {"power", "--replicates", "10"},
           {"estimate", "--input", "/nonexistent/file.csv"},
           {"--output", "xml", "kappa-theta", "--family", "normal", "--theta", "0"}}) {
    const Outcome o = run(args);
    INFO(o.err);
    CHECK(o.code == 2);
    CHECK_THAT(o.err, StartsWith("error[Usage]: "));
    CHECK(lines(o.err) == 1);
  }
}

TEST_CASE("runtime errors exit 1 with their code") {
  const std::string bad = temp_path("bad.csv");
  std::ofstream(bad) << "1,2\n3,x\n";
  const Outcome p = run({"estimate", "--input", bad});
  CHECK(p.code == 1);
  CHECK_THAT(p.err, StartsWith("error[ParseError]: "));
  CHECK(lines(p.err) == 1);

  const Outcome t = run({"sample", "--family", "exponential", "--theta", "-0.5", "--n", "5"});
  CHECK(t.code == 1);
  CHECK_THAT(t.err, StartsWith("error[ThetaOutOfRange]: "));

  const std::string flat = temp_path("flat.csv");
  std::ofstream(flat) << "1,2\n1,3\n1,4\n";
  const Outcome r = run({"estimate", "--input", flat, "--rho"});
  CHECK(r.code == 1);
  CHECK_THAT(r.err, StartsWith("error[DegenerateMarginal]: "));
}

TEST_CASE("help exits cleanly") {
  const Outcome o = run({"--help"});
  CHECK(o.code == 0);
  CHECK_THAT(o.out, ContainsSubstring("kappa-theta"));
}
