#include "kappa/core.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <thread>

namespace kappa {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::too_few_rows: return "TooFewRows";
    case ErrorCode::sample_too_small: return "SampleTooSmall";
    case ErrorCode::degenerate_marginal: return "DegenerateMarginal";
    case ErrorCode::domain_error: return "DomainError";
    case ErrorCode::unsupported_family: return "UnsupportedFamily";
    case ErrorCode::non_monotone_quantile: return "NonMonotoneQuantile";
    case ErrorCode::all_values_equal: return "AllValuesEqual";
    case ErrorCode::degenerate_grid: return "DegenerateGrid";
    case ErrorCode::empty_spectrum: return "EmptySpectrum";
    case ErrorCode::theta_out_of_range: return "ThetaOutOfRange";
    case ErrorCode::n_nonpositive: return "NOnPositive";
    case ErrorCode::unknown_estimator: return "UnknownEstimator";
    case ErrorCode::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

ParseError::ParseError(std::size_t row, const std::string& message)
    : Error(ErrorCode::parse_error, "row " + std::to_string(row) + ": " + message), row_(row) {}

PairedSample::PairedSample(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() != ys_.size()) {
    throw Error(ErrorCode::invalid_argument, "xs and ys differ in length");
  }
  if (xs_.size() < 2) {
    throw Error(ErrorCode::sample_too_small, "a paired sample needs n >= 2");
  }
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i])) {
      throw Error(ErrorCode::invalid_argument,
                  "non-finite value at index " + std::to_string(i));
    }
  }
}

namespace {

// splitmix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

}  // namespace

SeedSpec SeedSpec::child(std::uint64_t tag) const noexcept {
  return SeedSpec{mix64(master_seed ^ mix64(stream_index + 0x632be59bd9b4e019ULL)), tag};
}

void NumericConfig::validate() const {
  if (!(eig_zero_tol > 0.0) || !(quad_rel_tol > 0.0) || !(special_fn_tol > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "numeric tolerances must be strictly positive");
  }
}

PairedSample parse_sample(std::istream& in) {
  std::vector<double> xs;
  std::vector<double> ys;
  std::string line;
  bool first_line = true;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    std::string_view view = trim(line);
    if (first_line && view.size() >= 3 && static_cast<unsigned char>(view[0]) == 0xEF) {
      view.remove_prefix(3);  // UTF-8 BOM
    }
    if (view.empty()) continue;
    const auto fields = split_fields(view);
    if (first_line) {
      first_line = false;
      bool any_numeric = false;
      for (auto f : fields) any_numeric = any_numeric || parse_number(f).has_value();
      if (!any_numeric) continue;
    }
    ++row;
    if (fields.size() != 2) {
      throw ParseError(row, "expected 2 fields, found " + std::to_string(fields.size()));
    }
    const auto x = parse_number(fields[0]);
    const auto y = parse_number(fields[1]);
    if (!x || !y) throw ParseError(row, "non-numeric field");
    if (!std::isfinite(*x) || !std::isfinite(*y)) throw ParseError(row, "non-finite value");
    xs.push_back(*x);
    ys.push_back(*y);
  }
  if (xs.size() < 2) {
    throw Error(ErrorCode::too_few_rows,
                "need at least 2 data rows, found " + std::to_string(xs.size()));
  }
  return PairedSample(std::move(xs), std::move(ys));
}

PairedSample load_sample(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  return parse_sample(in);
}

void write_sample(const PairedSample& sample, std::ostream& out) {
  char buf[64];
  out << "x,y\n";
  for (std::size_t i = 0; i < sample.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", sample.xs()[i], sample.ys()[i]);
    out << buf;
  }
}

void write_sample(const PairedSample& sample, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  write_sample(sample, out);
  if (!out) throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

unsigned resolve_threads(unsigned requested) noexcept {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace kappa
