#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "kappa/core.hpp"
#include "kappa/rng.hpp"

using namespace kappa;

namespace {

PairedSample parse(const std::string& text) {
  std::istringstream in(text);
  return parse_sample(in);
}

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a kappa::Error");
  return ErrorCode::invalid_argument;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("kappa_core_" + name);
}

}  // namespace

TEST_CASE("csv without header parses in row order") {
  const PairedSample s = parse("0,0\n1,1\n2,2");
  CHECK(s == PairedSample({0, 1, 2}, {0, 1, 2}));
}

TEST_CASE("csv header is detected and skipped") {
  const PairedSample s = parse("x,y\n0.5,1.5\n-2,3e2\n");
  CHECK(s == PairedSample({0.5, -2}, {1.5, 300}));
}

TEST_CASE("one data row after the header is too few") {
  CHECK(code_of([] { (void)parse("x,y\n0.5,1.5"); }) == ErrorCode::too_few_rows);
}

TEST_CASE("malformed field reports its data row") {
  try {
    (void)parse("a,b\n1,2\n3,z");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.code() == ErrorCode::parse_error);
    CHECK(e.row() == 2);
  }
}

TEST_CASE("wrong arity and non-finite values are parse errors") {
  CHECK(code_of([] { (void)parse("1,2\n3,4,5\n"); }) == ErrorCode::parse_error);
  CHECK(code_of([] { (void)parse("1,2\n3\n"); }) == ErrorCode::parse_error);
  CHECK(code_of([] { (void)parse("1,2\nnan,4\n5,6\n"); }) == ErrorCode::parse_error);
  CHECK(code_of([] { (void)parse("1,2\ninf,4\n5,6\n"); }) == ErrorCode::parse_error);
}

TEST_CASE("unreadable file is an io error") {
  CHECK(code_of([] { (void)load_sample("/nonexistent/dir/file.csv"); }) == ErrorCode::io_error);
}

TEST_CASE("write then load round-trips exactly") {
  RandomStream rng(SeedSpec{5, 0});
  std::vector<double> xs;
  std::vector<double> ys;
  for (int i = 0; i < 200; ++i) {
    xs.push_back(rng.normal() * std::pow(10.0, static_cast<int>(rng.below(40)) - 20));
    ys.push_back(rng.uniform() / 3.0);
  }
  xs.push_back(std::numeric_limits<double>::denorm_min());
  ys.push_back(-std::numeric_limits<double>::max());
  const PairedSample s(xs, ys);
  const auto path = temp_file("roundtrip.csv");
  write_sample(s, path);
  CHECK(load_sample(path) == s);
  std::filesystem::remove(path);
}

TEST_CASE("paired sample invariants") {
  CHECK(code_of([] { PairedSample({1, 2}, {1}); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { PairedSample({1}, {1}); }) == ErrorCode::sample_too_small);
  CHECK(code_of([] {
          PairedSample({1, std::numeric_limits<double>::infinity()}, {1, 2});
        }) == ErrorCode::invalid_argument);
  const PairedSample s({1, 2, 3}, {4, 5, 6});
  CHECK(s.swapped() == PairedSample({4, 5, 6}, {1, 2, 3}));
}

TEST_CASE("substreams are deterministic and separated") {
  const SeedSpec s{7, 0};
  CHECK(substream(s).uniform() == substream(s).uniform());
  RandomStream a(SeedSpec{7, 0});
  RandomStream b(SeedSpec{7, 1});
  int same = 0;
  for (int i = 0; i < 100; ++i) same += a.next_u64() == b.next_u64();
  CHECK(same == 0);
  CHECK(SeedSpec{7, 0}.child(3) == SeedSpec{7, 0}.child(3));
  CHECK_FALSE(SeedSpec{7, 0}.child(3) == SeedSpec{7, 0}.child(4));
  CHECK_FALSE(SeedSpec{7, 0}.child(3) == SeedSpec{7, 1}.child(3));
}

TEST_CASE("uniform and normal variates have the right moments") {
  RandomStream rng(SeedSpec{11, 0});
  double su = 0.0;
  constexpr int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    su += u;
  }
  CHECK(std::fabs(su / n - 0.5) <= 0.002);

  double sz = 0.0;
  double szz = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sz += z;
    szz += z * z;
  }
  CHECK(std::fabs(sz / n) <= 0.005);
  CHECK(std::fabs(szz / n - 1.0) <= 0.01);
}

TEST_CASE("bounded integers stay in range and cover it") {
  RandomStream rng(SeedSpec{13, 0});
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = rng.below(7);
    REQUIRE(v < 7);
    ++hits[v];
  }
  for (int h : hits) CHECK(h > 800);
}

TEST_CASE("numeric config rejects non-positive tolerances") {
  CHECK_NOTHROW(NumericConfig{}.validate());
  NumericConfig c;
  c.quad_rel_tol = 0.0;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::invalid_argument);
}

TEST_CASE("error codes have stable names") {
  CHECK(to_string(ErrorCode::too_few_rows) == "TooFewRows");
  CHECK(to_string(ErrorCode::n_nonpositive) == "NOnPositive");
  CHECK(to_string(ErrorCode::theta_out_of_range) == "ThetaOutOfRange");
}
