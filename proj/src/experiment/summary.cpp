#include "govlab/experiment/summary.hpp"

#include "govlab/core/error.hpp"
#include "govlab/tally/tally.hpp"

#include <cmath>
#include <cstdio>

namespace govlab::experiment {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

ConditionSummary condition_summary(const std::map<Condition, std::vector<std::vector<std::uint64_t>>>& allocations) {
  ConditionSummary out;
  for (const auto& cond : kConditions) {
    auto it = allocations.find(cond);
    if (it == allocations.end()) continue;

    std::vector<std::vector<double>> ratios;
    std::size_t zeros = 0;
    for (const auto& alloc : it->second) {
      auto rv = tally::ratio_vector(alloc);
      if (rv.zero) {
        ++zeros;
        continue;
      }
      if (!ratios.empty() && rv.values.size() != ratios.front().size()) {
        throw Error(ErrorKind::kInvalidArgument, "LENGTH_MISMATCH", "ballots in " + cond.code() + " differ in length");
      }
      ratios.push_back(std::move(rv.values));
    }
    out.zero_ballots_excluded[cond] = zeros;
    if (ratios.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "EMPTY_CONDITION", "no usable ballots for condition " + cond.code());
    }

    const std::size_t n = ratios.size();
    for (std::size_t j = 0; j < ratios.front().size(); ++j) {
      double mean = 0;
      for (const auto& r : ratios) mean += r[j];
      mean /= static_cast<double>(n);
      double ss = 0;
      for (const auto& r : ratios) ss += (r[j] - mean) * (r[j] - mean);
      SummaryCell cell{cond, j, mean, 0.0, n, n == 1};
      if (n > 1) cell.std = std::sqrt(ss / static_cast<double>(n - 1));
      out.cells.push_back(cell);
    }
  }
  return out;
}

void write_summary_csv(const ConditionSummary& summary, std::ostream& out) {
  out << "condition,choice,mean,std,n\n";
  for (const auto& c : summary.cells) {
    out << c.condition.code() << ',' << (c.choice + 1) << ',' << format_number(c.mean) << ','
        << format_number(c.std) << ',' << c.n << '\n';
  }
}

void write_regression_csv(const RegressionFit& fit, std::ostream& out) {
  out << "term,coef,se,t,p\n";
  for (std::size_t j = 0; j < fit.terms.size(); ++j) {
    out << fit.terms[j] << ',' << format_number(fit.coefficients[j]) << ',' << format_number(fit.standard_errors[j])
        << ',' << format_number(fit.t_stats[j]) << ',' << format_number(fit.p_values[j]) << '\n';
  }
}

}  // namespace govlab::experiment
