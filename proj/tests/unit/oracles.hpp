#pragma once

// Independent reference computations for tests. Deliberately naive: plain
// loops, long double, no shared code with the library under test.

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

struct BruteTally {
  std::vector<long double> scores;
  std::vector<std::size_t> winners;
};

// quadratic: sum of sqrt(tokens); weighted: sum of tokens. Ties within a
// relative 1e-12 count as ties.
inline BruteTally brute_tally(const std::vector<std::vector<std::uint64_t>>& ballots, std::size_t options,
                              bool quadratic) {
  BruteTally t;
  t.scores.assign(options, 0.0L);
  for (const auto& b : ballots) {
    for (std::size_t j = 0; j < options; ++j) {
      const long double x = static_cast<long double>(b[j]);
      t.scores[j] += quadratic ? std::sqrt(x) : x;
    }
  }
  long double best = -1;
  for (auto s : t.scores) best = std::max(best, s);
  for (std::size_t j = 0; j < options; ++j) {
    if (std::fabs(t.scores[j] - best) <= 1e-12L * std::max<long double>(1, best)) t.winners.push_back(j);
  }
  return t;
}

// Solves (X^T X) b = X^T y by Gauss-Jordan with partial pivoting.
inline std::vector<double> normal_equations(const std::vector<std::vector<double>>& X, const std::vector<double>& y) {
  const std::size_t n = X.size(), k = X[0].size();
  std::vector<std::vector<long double>> A(k, std::vector<long double>(k + 1, 0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t r = 0; r < n; ++r) A[i][j] += static_cast<long double>(X[r][i]) * X[r][j];
    }
    for (std::size_t r = 0; r < n; ++r) A[i][k] += static_cast<long double>(X[r][i]) * y[r];
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r) {
      if (std::fabs(A[r][c]) > std::fabs(A[piv][c])) piv = r;
    }
    std::swap(A[c], A[piv]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c) continue;
      const long double f = A[r][c] / A[c][c];
      for (std::size_t j = c; j <= k; ++j) A[r][j] -= f * A[c][j];
    }
  }
  std::vector<double> b(k);
  for (std::size_t i = 0; i < k; ++i) b[i] = static_cast<double>(A[i][k] / A[i][i]);
  return b;
}

// r = cov(x,y) / (sd(x) sd(y)) by the textbook two-pass formula.
inline double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

}  // namespace oracle
