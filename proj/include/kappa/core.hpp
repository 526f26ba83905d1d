#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kappa {

/// Machine-readable category attached to every library error.
enum class ErrorCode {
  io_error,
  parse_error,
  too_few_rows,
  sample_too_small,
  degenerate_marginal,
  domain_error,
  unsupported_family,
  non_monotone_quantile,
  all_values_equal,
  degenerate_grid,
  empty_spectrum,
  theta_out_of_range,
  n_nonpositive,
  unknown_estimator,
  invalid_argument,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Malformed CSV content. `row` is the 1-based data row (header excluded).
class ParseError : public Error {
 public:
  ParseError(std::size_t row, const std::string& message);

  [[nodiscard]] std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Immutable array of (x, y) observations. Construction enforces equal
/// lengths, n >= 2 and finite entries.
class PairedSample {
 public:
  PairedSample(std::vector<double> xs, std::vector<double> ys);

  [[nodiscard]] std::size_t size() const noexcept { return xs_.size(); }
  [[nodiscard]] std::span<const double> xs() const noexcept { return xs_; }
  [[nodiscard]] std::span<const double> ys() const noexcept { return ys_; }

  /// Same pairs with the roles of x and y exchanged.
  [[nodiscard]] PairedSample swapped() const { return PairedSample(ys_, xs_); }

  friend bool operator==(const PairedSample&, const PairedSample&) = default;

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

/// Identifies one deterministic random substream: replicate r of a Monte Carlo
/// loop uses {master, r}.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  /// Seed of a nested stream, e.g. the permutations drawn inside replicate r.
  /// Pure function of (this, tag).
  [[nodiscard]] SeedSpec child(std::uint64_t tag) const noexcept;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

struct NumericConfig {
  double eig_zero_tol = 1e-10;
  double quad_rel_tol = 1e-8;
  double special_fn_tol = 1e-12;

  /// Throws invalid_argument unless every tolerance is strictly positive.
  void validate() const;
};

/// Reads a two-column CSV. A first row in which no field parses as a number
/// is treated as a header.
[[nodiscard]] PairedSample load_sample(const std::filesystem::path& path);
[[nodiscard]] PairedSample parse_sample(std::istream& in);

/// Writes "x,y" rows with 17 significant digits so load_sample round-trips.
void write_sample(const PairedSample& sample, std::ostream& out);
void write_sample(const PairedSample& sample, const std::filesystem::path& path);

/// Number of worker threads to use for a requested count (0 = hardware).
[[nodiscard]] unsigned resolve_threads(unsigned requested) noexcept;

}  // namespace kappa
