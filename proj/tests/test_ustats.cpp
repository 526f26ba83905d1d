#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "kappa/samplers.hpp"
#include "kappa/ustats.hpp"
#include "support.hpp"

using namespace kappa;
using namespace kappa::testing;
using Catch::Matchers::WithinRel;

namespace {

void check_same(const UStatBundle& a, const UStatBundle& b, double tol) {
  CHECK(rel_err(a.u1, b.u1) <= tol);
  CHECK(rel_err(a.u2, b.u2) <= tol);
  CHECK(rel_err(a.u12, b.u12) <= tol);
  CHECK(rel_err(a.u3, b.u3) <= tol);
  CHECK(rel_err(a.v1, b.v1) <= tol);
  CHECK(rel_err(a.v2, b.v2) <= tol);
  CHECK(rel_err(a.v12, b.v12) <= tol);
  CHECK(rel_err(a.v3, b.v3) <= tol);
  CHECK(a.n == b.n);
}

PairedSample random_sample(std::uint64_t s, std::int64_t n) {
  RandomStream rng(SeedSpec{31, s});
  return sample_family(random_family(rng), n, SeedSpec{32, s});
}

}  // namespace

TEST_CASE("hand values for 0,1,2") {
  const PairedSample s({0, 1, 2}, {0, 1, 2});
  for (const UStatBundle& u : {compute_ustats(s), compute_ustats_bruteforce(s)}) {
    CHECK_THAT(u.u1, WithinRel(4.0 / 3.0, 1e-15));
    CHECK_THAT(u.u2, WithinRel(4.0 / 3.0, 1e-15));
    CHECK_THAT(u.u12, WithinRel(2.0, 1e-15));
    CHECK_THAT(u.u3, WithinRel(5.0 / 3.0, 1e-15));
    CHECK_THAT(u.v3, WithinRel(22.0 / 27.0, 1e-15));
  }
}

TEST_CASE("constant sample gives zero statistics") {
  const UStatBundle u = compute_ustats(PairedSample({4, 4, 4}, {4, 4, 4}));
  CHECK(u.u1 == 0.0);
  CHECK(u.u12 == 0.0);
  CHECK(u.u3 == 0.0);
  CHECK(u.v3 == 0.0);
}

TEST_CASE("n = 2 is too small") {
  const PairedSample s({0, 1}, {0, 1});
  CHECK_THROWS_MATCHES(compute_ustats(s), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == ErrorCode::sample_too_small; }));
  CHECK_THROWS_AS(compute_ustats_bruteforce(s), Error);
}

TEST_CASE("constant y zeroes the cross statistics") {
  const UStatBundle u = compute_ustats_bruteforce(PairedSample({0, 0, 1}, {5, 5, 5}));
  CHECK(u.u12 == 0.0);
  CHECK(u.u3 == 0.0);
}

TEST_CASE("fast path matches brute force on random samples") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const PairedSample sample = random_sample(s, 3 + static_cast<std::int64_t>(s % 28));
    check_same(compute_ustats(sample), compute_ustats_bruteforce(sample), 1e-12);
  }
}

TEST_CASE("V to U identities") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const PairedSample sample = random_sample(100 + s, 3 + static_cast<std::int64_t>(s));
    const UStatBundle u = compute_ustats(sample);
    const double n = static_cast<double>(sample.size());
    const double c2 = n * (n - 1.0) / 2.0;
    const double c3 = n * (n - 1.0) * (n - 2.0) / 6.0;
    CHECK(rel_err(n * n * u.v1, 2.0 * c2 * u.u1) <= 1e-12);
    CHECK(rel_err(n * n * u.v2, 2.0 * c2 * u.u2) <= 1e-12);
    CHECK(rel_err(n * n * u.v12, 2.0 * c2 * u.u12) <= 1e-12);
    CHECK(rel_err(n * n * n * u.v3, 6.0 * c3 * u.u3 + 2.0 * c2 * u.u12) <= 1e-12);
  }
}

TEST_CASE("statistics are nonnegative") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const UStatBundle u = compute_ustats(random_sample(200 + s, 3 + static_cast<std::int64_t>(s)));
    CHECK(u.u1 >= 0.0);
    CHECK(u.u2 >= 0.0);
    CHECK(u.u12 >= 0.0);
    CHECK(u.u3 >= 0.0);
    CHECK(u.v3 >= 0.0);
  }
}

TEST_CASE("scale and shift of x") {
  const PairedSample s = random_sample(7, 25);
  const UStatBundle base = compute_ustats(s);
  std::vector<double> scaled(s.xs().begin(), s.xs().end());
  std::vector<double> shifted = scaled;
  for (auto& v : scaled) v *= 2.5;
  for (auto& v : shifted) v += 17.0;
  const std::vector<double> ys(s.ys().begin(), s.ys().end());
  const UStatBundle a = compute_ustats(PairedSample(scaled, ys));
  CHECK(rel_err(a.u1, 2.5 * base.u1) <= 1e-13);
  CHECK(rel_err(a.u2, base.u2) <= 1e-13);
  CHECK(rel_err(a.u12, 2.5 * base.u12) <= 1e-13);
  CHECK(rel_err(a.u3, 2.5 * base.u3) <= 1e-13);
  check_same(compute_ustats(PairedSample(shifted, ys)), base, 1e-12);
}

TEST_CASE("exchange of coordinates and joint permutation") {
  const PairedSample s = random_sample(9, 30);
  const UStatBundle base = compute_ustats(s);
  const UStatBundle sw = compute_ustats(s.swapped());
  CHECK(rel_err(sw.u1, base.u2) <= 1e-13);
  CHECK(rel_err(sw.u2, base.u1) <= 1e-13);
  CHECK(rel_err(sw.u12, base.u12) <= 1e-13);
  CHECK(rel_err(sw.u3, base.u3) <= 1e-13);

  std::vector<std::size_t> perm(s.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  RandomStream rng(SeedSpec{10, 0});
  for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i : perm) {
    xs.push_back(s.xs()[i]);
    ys.push_back(s.ys()[i]);
  }
  check_same(compute_ustats(PairedSample(xs, ys)), base, 1e-12);
}

TEST_CASE("ties need no special handling") {
  const PairedSample s({1, 1, 2, 2, 3}, {0, 0, 0, 1, 1});
  check_same(compute_ustats(s), compute_ustats_bruteforce(s), 1e-14);
}
