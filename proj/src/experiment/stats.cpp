#include "govlab/experiment/stats.hpp"

#include "govlab/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace govlab::experiment {

namespace {

double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // The continued fraction converges fast for x < (a+1)/(a+b+2); use symmetry otherwise.
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  return std::clamp(incomplete_beta(df / 2.0, 0.5, df / (df + t * t)), 0.0, 1.0);
}

double student_t_cdf(double t, double df) {
  const double tail = student_t_two_sided_p(t, df) / 2.0;
  return t >= 0 ? 1.0 - tail : tail;
}

RegressionFit ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::vector<std::string> terms) {
  const auto n = static_cast<std::size_t>(X.rows());
  const auto p = static_cast<std::size_t>(X.cols());
  if (static_cast<std::size_t>(y.size()) != n) {
    throw Error(ErrorKind::kInvalidArgument, "LENGTH_MISMATCH", "y length differs from design rows");
  }
  if (n <= p) {
    throw Error(ErrorKind::kInvalidArgument, "TOO_FEW_ROWS",
                "need more rows (" + std::to_string(n) + ") than columns (" + std::to_string(p) + ")");
  }
  if (terms.empty()) {
    for (std::size_t j = 0; j < p; ++j) terms.push_back("x" + std::to_string(j));
  }
  if (terms.size() != p) throw Error(ErrorKind::kInvalidArgument, "LENGTH_MISMATCH", "term names do not match columns");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (static_cast<std::size_t>(qr.rank()) < p) {
    throw Error(ErrorKind::kInvalidArgument, "RANK_DEFICIENT",
                "design matrix rank " + std::to_string(qr.rank()) + " < " + std::to_string(p));
  }
  Eigen::VectorXd beta = qr.solve(y);
  const Eigen::VectorXd resid = y - X * beta;
  double rss = resid.squaredNorm();
  // An exact fit leaves rounding noise in the residuals and in coefficients that
  // should be zero; snap both so perfect lines and constant y come out exact.
  const double tol = 64 * std::numeric_limits<double>::epsilon() * y.norm();
  if (std::sqrt(rss) <= tol) {
    rss = 0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
      if (std::fabs(beta(j)) * X.col(j).norm() <= tol) beta(j) = 0;
    }
  }
  const double df = static_cast<double>(n - p);
  const double sigma2 = rss / df;
  const Eigen::MatrixXd xtx_inv = (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(X.cols(), X.cols()));

  RegressionFit fit;
  fit.terms = std::move(terms);
  fit.n = n;
  fit.residual_variance = sigma2;
  const double tss = (y.array() - y.mean()).square().sum();
  fit.r_squared = tss > 0 ? 1.0 - rss / tss : 0.0;

  for (std::size_t j = 0; j < p; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const double coef = beta(jj);
    const double se = std::sqrt(std::max(0.0, sigma2 * xtx_inv(jj, jj)));
    double t;
    if (se > 0) {
      t = coef / se;
    } else {
      t = coef == 0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), coef);
    }
    fit.coefficients.push_back(coef);
    fit.standard_errors.push_back(se);
    fit.t_stats.push_back(t);
    fit.p_values.push_back(student_t_two_sided_p(t, df));
  }
  return fit;
}

DesignMatrix::DesignMatrix(std::size_t rows) : rows_(rows) {}

DesignMatrix& DesignMatrix::intercept() { return column("(intercept)", std::vector<double>(rows_, 1.0)); }

DesignMatrix& DesignMatrix::column(std::string name, const std::vector<double>& values) {
  if (values.size() != rows_) throw Error(ErrorKind::kInvalidArgument, "LENGTH_MISMATCH", "column " + name);
  names_.push_back(std::move(name));
  columns_.push_back(values);
  return *this;
}

DesignMatrix& DesignMatrix::interaction(const std::string& a, const std::string& b) {
  auto find = [&](const std::string& name) -> const std::vector<double>& {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw Error(ErrorKind::kInvalidArgument, "UNKNOWN_TERM", "no column named " + name);
    return columns_[static_cast<std::size_t>(it - names_.begin())];
  };
  const auto& ca = find(a);
  const auto& cb = find(b);
  std::vector<double> prod(rows_);
  for (std::size_t i = 0; i < rows_; ++i) prod[i] = ca[i] * cb[i];
  return column(a + ":" + b, prod);
}

Eigen::MatrixXd DesignMatrix::matrix() const {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(columns_.size()));
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    for (std::size_t i = 0; i < rows_; ++i) {
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = columns_[j][i];
    }
  }
  return X;
}

Correlation pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error(ErrorKind::kInvalidArgument, "LENGTH_MISMATCH", "x and y differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw Error(ErrorKind::kInvalidArgument, "TOO_FEW_POINTS", "pearson needs at least 3 points");

  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw Error(ErrorKind::kInvalidArgument, "ZERO_VARIANCE", "an input has zero variance");

  Correlation c;
  c.n = n;
  c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(n - 2);
  if (std::fabs(c.r) == 1.0) {
    c.p = 0.0;
  } else {
    c.p = student_t_two_sided_p(c.r * std::sqrt(df / (1.0 - c.r * c.r)), df);
  }
  return c;
}

}  // namespace govlab::experiment
