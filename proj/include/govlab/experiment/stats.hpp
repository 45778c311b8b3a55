#pragma once

// Small statistics kit: OLS with classical standard errors and Pearson
// correlation, both with two-sided p-values from Student's t.

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace govlab::experiment {

/// Regularized incomplete beta I_x(a, b), by Lentz's continued fraction.
/// Absolute error is well below 1e-12 over the parameter ranges used here.
double incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);
/// P(|T| >= |t|).
double student_t_two_sided_p(double t, double df);

struct RegressionFit {
  std::vector<std::string> terms;
  std::vector<double> coefficients;
  std::vector<double> standard_errors;
  std::vector<double> t_stats;
  std::vector<double> p_values;
  std::size_t n = 0;
  double r_squared = 0;
  double residual_variance = 0;
};

/// X must already contain its intercept column. Throws InvalidArgument
/// "TOO_FEW_ROWS" when n <= columns and "RANK_DEFICIENT" when X is not full rank.
/// A coefficient with zero standard error gets t = 0, p = 1 if it is exactly
/// zero and |t| = inf, p = 0 otherwise. R^2 is reported as 0 when y is constant.
RegressionFit ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::vector<std::string> terms = {});

/// Column-wise builder for design matrices with indicator and interaction terms.
class DesignMatrix {
 public:
  explicit DesignMatrix(std::size_t rows);

  DesignMatrix& intercept();
  DesignMatrix& column(std::string name, const std::vector<double>& values);
  /// Element-wise product of two existing columns.
  DesignMatrix& interaction(const std::string& a, const std::string& b);

  Eigen::MatrixXd matrix() const;
  const std::vector<std::string>& terms() const noexcept { return names_; }

 private:
  std::size_t rows_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

struct Correlation {
  double r = 0;
  double p = 1;
  std::size_t n = 0;
};

/// Throws InvalidArgument "TOO_FEW_POINTS" (n < 3), "LENGTH_MISMATCH", "ZERO_VARIANCE".
Correlation pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace govlab::experiment
