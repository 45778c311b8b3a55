#include "govlab/experiment/survey.hpp"

#include "govlab/core/error.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace govlab::experiment {

namespace {
void check_scores(const std::map<std::string, int>& items, const Address& who) {
  for (const auto& [item, score] : items) {
    if (score < 1 || score > 5) {
      throw Error(ErrorKind::kInvalidArgument, "SCORE_OUT_OF_RANGE",
                  "score " + std::to_string(score) + " for '" + item + "' from " + who + " is outside 1..5");
    }
  }
}
}  // namespace

void SurveyResponse::validate() const {
  check_scores(likert_items, participant);
  check_scores(vdem_items, participant);
}

Json SurveyResponse::to_json() const {
  return Json{{"participant", participant}, {"likert", likert_items}, {"vdem", vdem_items}};
}

SurveyResponse SurveyResponse::from_json(const Json& j) {
  try {
    SurveyResponse r;
    r.participant = j.value("participant", std::string{});
    r.likert_items = j.value("likert", std::map<std::string, int>{});
    r.vdem_items = j.value("vdem", std::map<std::string, int>{});
    r.validate();
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument, "BAD_SURVEY", e.what());
  }
}

std::vector<ConditionMean> likert_summary(const ResponsesByCondition& responses, const std::string& item) {
  std::vector<ConditionMean> out;
  for (const auto& cond : kConditions) {
    auto it = responses.find(cond);
    if (it == responses.end()) continue;
    double sum = 0;
    std::size_t n = 0;
    for (const auto& r : it->second) {
      r.validate();
      if (item.empty()) {
        for (const auto& [_, score] : r.likert_items) {
          sum += score;
          ++n;
        }
      } else if (auto s = r.likert_items.find(item); s != r.likert_items.end()) {
        sum += s->second;
        ++n;
      }
    }
    if (n > 0) out.push_back({cond, sum / static_cast<double>(n), n});
  }
  return out;
}

std::string format_likert_line(const std::vector<ConditionMean>& means) {
  std::string line;
  for (const auto& m : means) {
    if (!line.empty()) line += ", ";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", m.mean);
    line += m.condition.label() + ": " + buf;
  }
  return line;
}

std::vector<DimensionMeans> vdem_aggregate(const ResponsesByCondition& responses) {
  std::vector<std::string> dims(kVdemDimensions.begin(), kVdemDimensions.end());
  std::set<std::string> extra;
  for (const auto& [_, list] : responses) {
    for (const auto& r : list) {
      r.validate();
      for (const auto& [dim, __] : r.vdem_items) {
        if (std::find(dims.begin(), dims.end(), dim) == dims.end()) extra.insert(dim);
      }
    }
  }
  dims.insert(dims.end(), extra.begin(), extra.end());

  std::vector<DimensionMeans> out;
  for (const auto& dim : dims) {
    DimensionMeans dm{dim, {}};
    for (const auto& cond : kConditions) {
      auto it = responses.find(cond);
      if (it == responses.end()) continue;
      double sum = 0;
      std::size_t n = 0;
      for (const auto& r : it->second) {
        if (auto s = r.vdem_items.find(dim); s != r.vdem_items.end()) {
          sum += s->second;
          ++n;
        }
      }
      if (n > 0) dm.by_condition.push_back({cond, sum / static_cast<double>(n), n});
    }
    out.push_back(std::move(dm));
  }
  return out;
}

}  // namespace govlab::experiment
