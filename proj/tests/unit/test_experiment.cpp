#include "govlab/core/error.hpp"
#include "govlab/core/rng.hpp"
#include "govlab/experiment/assignment.hpp"
#include "govlab/experiment/stats.hpp"
#include "govlab/experiment/summary.hpp"
#include "govlab/experiment/survey.hpp"
#include "unit/helpers.hpp"
#include "unit/oracles.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

using namespace govlab;
using namespace govlab::experiment;

namespace {

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

// 20 rows, two regressors plus their interaction, noisy.
struct Synthetic {
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
};

Synthetic synthetic(std::uint32_t seed, std::size_t n = 20) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-2, 2);
  std::normal_distribution<double> noise(0, 0.5);
  Synthetic s;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = static_cast<double>(i % 2);
    const double b = u(gen);
    s.rows.push_back({1.0, a, b, a * b});
    s.y.push_back(1.5 - 0.7 * a + 2.0 * b + 0.3 * a * b + noise(gen));
  }
  return s;
}

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows) {
  Eigen::MatrixXd X(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[0].size(); ++j) X(i, j) = rows[i][j];
  }
  return X;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

SurveyResponse response(const std::string& who, std::map<std::string, int> likert, std::map<std::string, int> vdem = {}) {
  return SurveyResponse{who, std::move(likert), std::move(vdem)};
}

const Condition kQE = kConditions[0];
const Condition kQP = kConditions[1];
const Condition kWE = kConditions[2];
const Condition kWP = kConditions[3];

}  // namespace

TEST_SUITE("experiment") {
  TEST_CASE("condition codes and labels") {
    for (const auto& c : kConditions) CHECK(parse_condition(c.code()) == c);
    CHECK(kQP.code() == "qp");
    CHECK(kQP.label() == "quadratic+20/80");
    CHECK(kWE.label() == "weighted+equal");
    CHECK(code_of([] { parse_condition("zz"); }) == "BAD_CONDITION");
  }

  TEST_CASE("assignment balance for n in {4, 114, 1000}") {
    for (std::size_t n : {4u, 114u, 1000u}) {
      auto plan = assign(testutil::addresses(n), 42);
      auto counts = plan.counts;
      std::sort(counts.begin(), counts.end());
      CHECK(counts.back() - counts.front() <= 1);
      std::size_t total = 0;
      for (auto c : counts) total += c;
      CHECK(total == n);
      if (n == 114) CHECK(counts == std::array<std::size_t, 4>{28, 28, 29, 29});
      if (n == 4) CHECK(counts == std::array<std::size_t, 4>{1, 1, 1, 1});
    }
  }

  TEST_CASE("assignment is seed-deterministic and input-order independent") {
    auto people = testutil::addresses(114);
    auto a = assign(people, 7);
    std::reverse(people.begin(), people.end());
    auto b = assign(people, 7);
    CHECK(a.assignment == b.assignment);
    auto c = assign(people, 8);
    CHECK(a.assignment != c.assignment);
  }

  TEST_CASE("property: assignment is a balanced bijection onto participants for n <= 1000") {
    SeededRng rng(99);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t n = 1 + rng.below(1000);
      auto people = testutil::addresses(n, "p" + std::to_string(trial));
      auto plan = assign(people, rng.next());
      REQUIRE(plan.assignment.size() == n);
      std::set<std::string> keys;
      std::array<std::size_t, 4> seen{};
      for (const auto& [addr, cond] : plan.assignment) {
        keys.insert(addr);
        ++seen[condition_index(cond)];
      }
      CHECK(keys == std::set<std::string>(people.begin(), people.end()));
      CHECK(seen == plan.counts);
      auto [lo, hi] = std::minmax_element(seen.begin(), seen.end());
      CHECK(*hi - *lo <= 1);
      std::size_t members = 0;
      for (const auto& c : kConditions) members += plan.members(c).size();
      CHECK(members == n);
    }
  }

  TEST_CASE("assignment rejects duplicates") {
    auto people = testutil::addresses(5);
    people.push_back(people[0]);
    CHECK_THROWS_AS(assign(people, 1), Error);
  }

  TEST_CASE("OLS matches the normal-equations oracle and residuals are orthogonal") {
    for (std::uint32_t seed : {1u, 2u, 3u, 4u, 5u}) {
      auto s = synthetic(seed);
      const Eigen::MatrixXd X = to_matrix(s.rows);
      const Eigen::VectorXd y = to_vector(s.y);
      auto fit = ols_fit(X, y, {"1", "a", "b", "a:b"});
      auto oracle_b = oracle::normal_equations(s.rows, s.y);
      REQUIRE(fit.coefficients.size() == 4);
      for (std::size_t j = 0; j < 4; ++j) CHECK(std::fabs(fit.coefficients[j] - oracle_b[j]) < 1e-9);
      const Eigen::VectorXd beta = to_vector(fit.coefficients);
      const Eigen::VectorXd resid = y - X * beta;
      const Eigen::VectorXd ortho = X.transpose() * resid;
      CHECK(ortho.cwiseAbs().maxCoeff() < 1e-8);
      CHECK(fit.n == 20);
      CHECK(fit.r_squared > 0);
      CHECK(fit.r_squared <= 1);

      // Classical SE: sqrt(diag(sigma^2 (X'X)^-1)) with sigma^2 = RSS/(n-k).
      const double sigma2 = resid.squaredNorm() / (20 - 4);
      CHECK(std::fabs(fit.residual_variance - sigma2) < 1e-9);
      const Eigen::MatrixXd inv = (X.transpose() * X).inverse();
      boost::math::students_t dist(16);
      for (int j = 0; j < 4; ++j) {
        const double se = std::sqrt(sigma2 * inv(j, j));
        CHECK(std::fabs(fit.standard_errors[j] - se) < 1e-9);
        const double t = fit.coefficients[j] / se;
        CHECK(std::fabs(fit.t_stats[j] - t) < 1e-8);
        const double p = 2 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
        CHECK(std::fabs(fit.p_values[j] - p) < 1e-10);
      }
    }
  }

  TEST_CASE("design matrix builder with interaction") {
    DesignMatrix d(3);
    d.intercept().column("a", {0, 1, 1}).column("b", {2, 3, 4}).interaction("a", "b");
    auto M = d.matrix();
    CHECK(d.terms() == std::vector<std::string>{"(intercept)", "a", "b", "a:b"});
    CHECK(M(0, 0) == 1);
    CHECK(M(0, 3) == 0);
    CHECK(M(2, 3) == 4);
    CHECK_THROWS_AS(d.column("c", {1, 2}), Error);
    CHECK_THROWS_AS(d.interaction("a", "zzz"), Error);
  }

  TEST_CASE("OLS edge cases: perfect line and constant y") {
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (int i = 0; i < 10; ++i) {
      rows.push_back({1.0, static_cast<double>(i)});
      y.push_back(2.0 * i);
    }
    auto line = ols_fit(to_matrix(rows), to_vector(y));
    CHECK(std::fabs(line.coefficients[0]) < 1e-12);
    CHECK(std::fabs(line.coefficients[1] - 2.0) < 1e-12);
    CHECK(std::fabs(line.r_squared - 1.0) < 1e-12);
    CHECK(line.p_values[1] == doctest::Approx(0.0));

    std::vector<double> flat(10, 3.0);
    auto c = ols_fit(to_matrix(rows), to_vector(flat));
    CHECK(std::fabs(c.coefficients[0] - 3.0) < 1e-12);
    CHECK(std::fabs(c.coefficients[1]) < 1e-12);
    CHECK(c.r_squared == 0.0);
    CHECK(c.p_values[1] == doctest::Approx(1.0));
  }

  TEST_CASE("OLS errors") {
    Eigen::MatrixXd X(2, 2);
    X << 1, 0, 1, 1;
    CHECK(code_of([&] { ols_fit(X, Eigen::VectorXd::Ones(2)); }) == "TOO_FEW_ROWS");
    Eigen::MatrixXd R(4, 2);
    R << 1, 2, 1, 2, 1, 2, 1, 2;
    CHECK(code_of([&] { ols_fit(R, Eigen::VectorXd::Ones(4)); }) == "RANK_DEFICIENT");
  }

  TEST_CASE("Student t against boost") {
    for (double df : {1.0, 2.0, 5.0, 16.0, 30.0, 112.0}) {
      boost::math::students_t dist(df);
      for (double t : {-4.0, -1.5, -0.2, 0.0, 0.7, 2.0, 3.3, 10.0}) {
        CHECK(std::fabs(student_t_cdf(t, df) - boost::math::cdf(dist, t)) < 1e-12);
        const double p = 2 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
        CHECK(std::fabs(student_t_two_sided_p(t, df) - p) < 1e-12);
      }
    }
    CHECK(incomplete_beta(2, 3, 0) == 0);
    CHECK(incomplete_beta(2, 3, 1) == 1);
  }

  TEST_CASE("Pearson matches the direct formula") {
    std::mt19937 gen(5);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> x, y;
      for (int i = 0; i < 25; ++i) {
        x.push_back(nd(gen));
        y.push_back(0.4 * x.back() + nd(gen));
      }
      auto c = pearson(x, y);
      CHECK(std::fabs(c.r - oracle::pearson_r(x, y)) < 1e-12);
      CHECK(std::fabs(pearson(y, x).r - c.r) < 1e-12);
      // Affine invariance; a negative scale flips the sign.
      std::vector<double> x2;
      for (double v : x) x2.push_back(3.0 * v - 7.0);
      CHECK(std::fabs(pearson(x2, y).r - c.r) < 1e-12);
      for (double& v : x2) v = -v;
      CHECK(std::fabs(pearson(x2, y).r + c.r) < 1e-12);
      // p from t = r sqrt((n-2)/(1-r^2)).
      const double t = c.r * std::sqrt(23.0 / (1 - c.r * c.r));
      boost::math::students_t dist(23);
      CHECK(std::fabs(c.p - 2 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)))) < 1e-10);
    }
  }

  TEST_CASE("Pearson edge cases") {
    std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> neg{-1, -2, -3, -4, -5};
    CHECK(pearson(x, x).r == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pearson(x, neg).r == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(pearson(x, x).p == doctest::Approx(0.0));
    CHECK(code_of([] { pearson({1, 2}, {1, 2}); }) == "TOO_FEW_POINTS");
    CHECK(code_of([] { pearson({1, 2, 3}, {1, 2}); }) == "LENGTH_MISMATCH");
    CHECK(code_of([] { pearson({1, 1, 1}, {1, 2, 3}); }) == "ZERO_VARIANCE");
  }

  TEST_CASE("condition summary: ratios, zero ballots, single ballot") {
    std::map<Condition, std::vector<std::vector<std::uint64_t>>> alloc;
    alloc[kQE] = {{20, 20, 30, 30}, {100, 0, 0, 0}, {0, 0, 0, 0}};
    alloc[kWP] = {{1, 1, 1, 1}};
    auto s = condition_summary(alloc);
    REQUIRE(s.cells.size() == 8);
    CHECK(s.cells[0].condition == kQE);
    CHECK(s.cells[0].choice == 0);
    CHECK(s.cells[0].mean == doctest::Approx(0.6));
    CHECK(s.cells[0].n == 2);
    CHECK(s.cells[0].std == doctest::Approx(std::sqrt(0.32)));
    CHECK(s.cells[2].mean == doctest::Approx(0.15));
    CHECK(s.zero_ballots_excluded.at(kQE) == 1);
    CHECK(s.cells[4].condition == kWP);
    CHECK(s.cells[4].small_sample);
    CHECK(s.cells[4].std == 0);
    for (const auto& c : s.cells) {
      CHECK(c.mean >= 0);
      CHECK(c.mean <= 1);
    }

    std::ostringstream csv;
    write_summary_csv(s, csv);
    std::istringstream lines(csv.str());
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    CHECK(header == "condition,choice,mean,std,n");
    CHECK(first.rfind("qe,1,", 0) == 0);

    std::map<Condition, std::vector<std::vector<std::uint64_t>>> empty;
    empty[kQE] = {{0, 0}};
    CHECK(code_of([&] { condition_summary(empty); }) == "EMPTY_CONDITION");
    std::map<Condition, std::vector<std::vector<std::uint64_t>>> ragged;
    ragged[kQE] = {{1, 2}, {1, 2, 3}};
    CHECK(code_of([&] { condition_summary(ragged); }) == "LENGTH_MISMATCH");
  }

  TEST_CASE("property: summary means are ratios summing to one per condition") {
    SeededRng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
      std::map<Condition, std::vector<std::vector<std::uint64_t>>> alloc;
      for (const auto& c : kConditions) {
        const std::size_t n = 1 + rng.below(6);
        for (std::size_t i = 0; i < n; ++i) alloc[c].push_back({rng.below(50), rng.below(50), 1 + rng.below(50)});
      }
      auto s = condition_summary(alloc);
      REQUIRE(s.cells.size() == 12);
      for (std::size_t c = 0; c < 4; ++c) {
        double sum = 0;
        for (std::size_t j = 0; j < 3; ++j) {
          const auto& cell = s.cells[c * 3 + j];
          CHECK(cell.mean >= 0);
          CHECK(cell.mean <= 1);
          sum += cell.mean;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("regression CSV") {
    auto s = synthetic(1);
    auto fit = ols_fit(to_matrix(s.rows), to_vector(s.y), {"1", "a", "b", "a:b"});
    std::ostringstream out;
    write_regression_csv(fit, out);
    CHECK(out.str().rfind("term,coef,se,t,p\n1,", 0) == 0);
    CHECK(format_number(0.5) == format_number(0.50));
  }

  TEST_CASE("likert summary") {
    ResponsesByCondition r;
    r[kQE] = {response("0x1", {{"understood_method", 3}}), response("0x2", {{"understood_method", 4}})};
    r[kWP] = {response("0x3", {{"understood_method", 5}}), response("0x4", {{"understood_method", 5}})};
    auto m = likert_summary(r, "understood_method");
    REQUIRE(m.size() == 2);
    CHECK(m[0].condition == kQE);
    CHECK(m[0].mean == 3.5);
    CHECK(m[0].n == 2);
    CHECK(m[1].condition == kWP);
    CHECK(m[1].mean == 5.0);
    CHECK(format_likert_line(m) == "quadratic+equal: 3.50, weighted+20/80: 5.00");
    CHECK(likert_summary(r, "absent").empty());

    r[kQP] = {response("0x5", {{"a", 1}, {"b", 5}})};
    auto all = likert_summary(r);
    REQUIRE(all.size() == 3);
    CHECK(all[1].condition == kQP);
    CHECK(all[1].mean == 3.0);

    CHECK(code_of([] { response("0x", {{"x", 6}}).validate(); }) == "SCORE_OUT_OF_RANGE");
    CHECK(code_of([] { response("0x", {}, {{"liberal", 0}}).validate(); }) == "SCORE_OUT_OF_RANGE");
    auto back = SurveyResponse::from_json(response("0x9", {{"x", 2}}, {{"liberal", 4}}).to_json());
    CHECK(back.likert_items.at("x") == 2);
    CHECK(back.vdem_items.at("liberal") == 4);
  }

  TEST_CASE("V-Dem aggregation") {
    std::map<std::string, int> full;
    for (auto d : kVdemDimensions) full[std::string(d)] = 4;
    ResponsesByCondition r;
    r[kWE] = {response("0x1", {}, full)};
    auto agg = vdem_aggregate(r);
    REQUIRE(agg.size() == kVdemDimensions.size());
    for (std::size_t i = 0; i < agg.size(); ++i) {
      CHECK(agg[i].dimension == kVdemDimensions[i]);
      REQUIRE(agg[i].by_condition.size() == 1);
      CHECK(agg[i].by_condition[0].mean == 4.0);
    }

    auto partial = full;
    partial.erase("liberal");
    auto other = full;
    other["liberal"] = 2;
    other["extra"] = 5;
    r[kWE] = {response("0x1", {}, partial), response("0x2", {}, other)};
    agg = vdem_aggregate(r);
    auto find = [&](const std::string& d) {
      for (const auto& a : agg) {
        if (a.dimension == d) return a;
      }
      FAIL("missing " << d);
      return agg[0];
    };
    CHECK(find("liberal").by_condition[0].n == 1);
    CHECK(find("liberal").by_condition[0].mean == 2.0);
    CHECK(find("participatory").by_condition[0].n == 2);
    CHECK(find("participatory").by_condition[0].mean == 4.0);
    CHECK(agg.back().dimension == "extra");
  }
}
