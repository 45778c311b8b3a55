#pragma once

#include "govlab/core/canonical.hpp"
#include "govlab/experiment/assignment.hpp"

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace govlab::experiment {

/// Dimensions every V-Dem style survey is expected to cover. Item wording is configuration.
inline constexpr std::array<std::string_view, 7> kVdemDimensions = {
    "participatory", "deliberative", "liberal", "egalitarian", "rule_of_law", "civil_society", "judicial_constraints"};

struct SurveyResponse {
  Address participant;
  std::map<std::string, int> likert_items;
  std::map<std::string, int> vdem_items;

  /// Throws InvalidArgument "SCORE_OUT_OF_RANGE" when any score is outside 1..5.
  void validate() const;
  Json to_json() const;
  /// Expects {"participant", "likert": {item: score}, "vdem": {dimension: score}}.
  static SurveyResponse from_json(const Json& j);
};

using ResponsesByCondition = std::map<Condition, std::vector<SurveyResponse>>;

struct ConditionMean {
  Condition condition;
  double mean = 0;
  std::size_t n = 0;  // scores averaged
};

/// Mean of `item` per condition, or of every Likert item when `item` is empty.
/// Conditions come out in kConditions order; those with no scores are omitted.
std::vector<ConditionMean> likert_summary(const ResponsesByCondition& responses, const std::string& item = {});

/// "quadratic+equal: 3.89, quadratic+20/80: 4.17, ..." with two decimals.
std::string format_likert_line(const std::vector<ConditionMean>& means);

struct DimensionMeans {
  std::string dimension;
  std::vector<ConditionMean> by_condition;
};

/// Per-dimension per-condition means. A response missing a dimension is left
/// out of that mean; `n` reports how many scores went in. The fixed dimensions
/// come first, any extra dimensions after them in name order.
std::vector<DimensionMeans> vdem_aggregate(const ResponsesByCondition& responses);

}  // namespace govlab::experiment
