#pragma once

#include "govlab/experiment/assignment.hpp"
#include "govlab/experiment/stats.hpp"

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace govlab::experiment {

/// One cell of the condition x choice table of allocation ratios.
struct SummaryCell {
  Condition condition;
  std::size_t choice = 0;  // 0-based option index
  double mean = 0;
  double std = 0;  // sample (n-1) standard deviation; 0 when n == 1
  std::size_t n = 0;
  bool small_sample = false;  // n == 1, std undefined
};

struct ConditionSummary {
  std::vector<SummaryCell> cells;  // condition-major, in kConditions order
  std::map<Condition, std::size_t> zero_ballots_excluded;
};

/// `allocations` holds the raw token vectors per condition. All-zero ballots
/// have no ratio vector; they are left out of the means and counted.
/// Throws InvalidArgument "EMPTY_CONDITION" if a listed condition has no usable ballot,
/// "LENGTH_MISMATCH" if ballots in a condition differ in length.
ConditionSummary condition_summary(const std::map<Condition, std::vector<std::vector<std::uint64_t>>>& allocations);

/// Header `condition,choice,mean,std,n`; condition is the short code, choice is 1-based.
void write_summary_csv(const ConditionSummary& summary, std::ostream& out);

/// Header `term,coef,se,t,p`.
void write_regression_csv(const RegressionFit& fit, std::ostream& out);

/// Fixed, locale-independent number formatting used in every CSV.
std::string format_number(double v);

}  // namespace govlab::experiment
