#pragma once

#include <vector>

#include <json.hpp>

#include "kappa/closed_form.hpp"
#include "kappa/estimators.hpp"
#include "kappa/inference.hpp"
#include "kappa/spectral.hpp"
#include "kappa/ustats.hpp"

namespace kappa {

// Field names follow the struct members so JSON output stays stable.

[[nodiscard]] nlohmann::ordered_json to_json(const SeedSpec& s);
[[nodiscard]] nlohmann::ordered_json to_json(const FamilySpec& f);
[[nodiscard]] nlohmann::ordered_json to_json(const UStatBundle& u);
[[nodiscard]] nlohmann::ordered_json to_json(const KappaEstimates& k);
[[nodiscard]] nlohmann::ordered_json to_json(const RhoEstimates& r);
[[nodiscard]] nlohmann::ordered_json to_json(const PopulationMoments& m);
[[nodiscard]] nlohmann::ordered_json to_json(const EigenSpectrum& s);

/// Draws are summarized by 1024 quantiles rather than listed.
[[nodiscard]] nlohmann::ordered_json to_json(const NullLimitModel& m);
[[nodiscard]] nlohmann::ordered_json to_json(const TestResult& t);
[[nodiscard]] nlohmann::ordered_json to_json(const PowerReport& p);
[[nodiscard]] nlohmann::ordered_json to_json(const NormalityReport& r);
[[nodiscard]] nlohmann::ordered_json to_json(const TimingReport& t);
[[nodiscard]] nlohmann::ordered_json to_json(const std::vector<TimingReport>& t);

}  // namespace kappa
