#include "kappa/family.hpp"

#include <cmath>

#include "kappa/core.hpp"

namespace kappa {

Family parse_family(std::string_view name) {
  if (name == "normal") return Family::normal;
  if (name == "uniform") return Family::uniform;
  if (name == "exponential" || name == "gbed") return Family::exponential;
  if (name == "laplace") return Family::laplace;
  if (name == "laplace-shared" || name == "laplace_shared") return Family::laplace_shared;
  if (name == "logistic") return Family::logistic;
  if (name == "chisquare" || name == "chi-square") return Family::chisquare;
  if (name == "exponential-printed" || name == "exponential_printed") {
    return Family::exponential_printed;
  }
  throw Error(ErrorCode::unsupported_family, "unknown family '" + std::string(name) + "'");
}

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::normal: return "normal";
    case Family::uniform: return "uniform";
    case Family::exponential: return "exponential";
    case Family::laplace: return "laplace";
    case Family::logistic: return "logistic";
    case Family::chisquare: return "chisquare";
    case Family::exponential_printed: return "exponential-printed";
    case Family::laplace_shared: return "laplace-shared";
  }
  return "normal";
}

double theta_lower_bound(Family f) noexcept {
  return (f == Family::exponential || f == Family::exponential_printed) ? 0.0 : -1.0;
}

void FamilySpec::validate() const {
  if (!std::isfinite(theta) || theta < theta_lower_bound(family) || theta > 1.0) {
    throw Error(ErrorCode::theta_out_of_range,
                "theta = " + std::to_string(theta) + " outside the legal range of family " +
                    std::string(to_string(family)));
  }
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0) || !std::isfinite(sigma1) || !std::isfinite(sigma2)) {
    throw Error(ErrorCode::domain_error, "sigma1 and sigma2 must be positive and finite");
  }
}

}  // namespace kappa
