#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "permsel/errors.hpp"
#include "permsel/linear_model.hpp"
#include "permsel/rng.hpp"

using namespace permsel;

namespace {

DesignMatrix intercept_only(int n) {
  return DesignMatrix(Eigen::MatrixXd::Ones(n, 1));
}

// Independent reference path: normal equations solved by LDLT instead of
// the QR route the implementation uses.
Eigen::VectorXd normal_equations(const Eigen::MatrixXd& x,
                                 const Eigen::VectorXd& y) {
  return (x.transpose() * x).ldlt().solve(x.transpose() * y);
}

Eigen::MatrixXd random_design(SplitMix64& rng, int n, int p) {
  Eigen::MatrixXd x(n, p);
  x.col(0).setOnes();
  for (int c = 1; c < p; ++c) {
    for (int r = 0; r < n; ++r) x(r, c) = rng.next_gaussian();
  }
  return x;
}

Eigen::VectorXd random_response(SplitMix64& rng, int n) {
  Eigen::VectorXd y(n);
  for (int r = 0; r < n; ++r) y(r) = rng.next_gaussian();
  return y;
}

}  // namespace

TEST_CASE("intercept-only fit recovers the sample mean and MLE variance") {
  Eigen::VectorXd y(3);
  y << 1.0, 2.0, 3.0;
  const FittedModel fit = fit_linear_gaussian(intercept_only(3), y);
  CHECK(fit.coefficients.size() == 1);
  CHECK(fit.coefficients(0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(fit.sigma2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(fit.n_obs == 3);
  CHECK(fit.k_params == 2);
  const double expected_loglik =
      -1.5 * (std::log(2.0 * std::numbers::pi * (2.0 / 3.0)) + 1.0);
  CHECK(fit.loglik == doctest::Approx(expected_loglik).epsilon(1e-14));
}

TEST_CASE("two points, two coefficients: perfect fit error") {
  Eigen::MatrixXd x(2, 2);
  x << 1.0, 0.0, 1.0, 1.0;
  Eigen::VectorXd y(2);
  y << 1.0, 2.0;
  CHECK_THROWS_AS(fit_linear_gaussian(DesignMatrix(x), y), PerfectFit);
}

TEST_CASE("fit matches the closed-form normal-equations solution") {
  Eigen::MatrixXd x(4, 2);
  x << 1, 1, 1, 2, 1, 3, 1, 4;
  Eigen::VectorXd y(4);
  y << 1, 2, 2, 4;
  const FittedModel fit = fit_linear_gaussian(DesignMatrix(x), y);

  // exact solution: beta = (0, 0.9), RSS = 0.7
  CHECK(std::abs(fit.coefficients(0)) < 1e-12);
  CHECK(fit.coefficients(1) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(fit.sigma2 == doctest::Approx(0.175).epsilon(1e-12));
  CHECK(fit.loglik == doctest::Approx(-2.189815522701445).epsilon(1e-12));

  const Eigen::VectorXd reference = normal_equations(x, y);
  CHECK((fit.coefficients - reference).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("length mismatch is rejected") {
  Eigen::VectorXd y(4);
  y << 1, 2, 3, 4;
  CHECK_THROWS_AS(fit_linear_gaussian(intercept_only(3), y), LengthMismatch);
}

TEST_CASE("collinear columns are rejected") {
  Eigen::MatrixXd x(5, 3);
  for (int i = 0; i < 5; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = i + 1.0;
    x(i, 2) = 2.0 * (i + 1.0);
  }
  Eigen::VectorXd y(5);
  y << 1, 3, 2, 5, 4;
  CHECK_THROWS_AS(fit_linear_gaussian(DesignMatrix(x), y), RankDeficient);
}

TEST_CASE("design matrix invariants") {
  CHECK_THROWS_AS(DesignMatrix{Eigen::MatrixXd(0, 1)}, DataError);
  Eigen::MatrixXd bad(2, 1);
  bad << 1.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(DesignMatrix{bad}, DataError);
}

TEST_CASE("residuals are orthogonal to the design columns") {
  SplitMix64 rng(2101);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 6 + static_cast<int>(rng.next_below(10));
    const int p = 1 + static_cast<int>(rng.next_below(4));
    const Eigen::MatrixXd x = random_design(rng, n, p);
    const Eigen::VectorXd y = random_response(rng, n);
    const FittedModel fit = fit_linear_gaussian(DesignMatrix(x), y);
    const Eigen::VectorXd residual = y - x * fit.coefficients;
    const double gradient = (x.transpose() * residual).cwiseAbs().maxCoeff();
    const double scale = (x.transpose() * y).cwiseAbs().maxCoeff();
    CHECK(gradient <= 1e-8 * std::max(1.0, scale));
  }
}

TEST_CASE("loglik equals the direct Gaussian log-density sum") {
  SplitMix64 rng(2102);
  for (int rep = 0; rep < 25; ++rep) {
    const int n = 7 + static_cast<int>(rng.next_below(8));
    const Eigen::MatrixXd x = random_design(rng, n, 2);
    const Eigen::VectorXd y = random_response(rng, n);
    const FittedModel fit = fit_linear_gaussian(DesignMatrix(x), y);
    const Eigen::VectorXd fitted = x * fit.coefficients;
    double direct = 0.0;
    for (int i = 0; i < n; ++i) {
      direct += -0.5 * std::log(2.0 * std::numbers::pi * fit.sigma2) -
                (y(i) - fitted(i)) * (y(i) - fitted(i)) / (2.0 * fit.sigma2);
    }
    CHECK(std::abs(direct - fit.loglik) <= 1e-10 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("adding a column never decreases the log-likelihood") {
  SplitMix64 rng(2103);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 8 + static_cast<int>(rng.next_below(8));
    const int p = 1 + static_cast<int>(rng.next_below(3));
    const Eigen::MatrixXd x = random_design(rng, n, p);
    const Eigen::VectorXd y = random_response(rng, n);

    Eigen::MatrixXd wider(n, p + 1);
    wider.leftCols(p) = x;
    for (int r = 0; r < n; ++r) wider(r, p) = rng.next_gaussian();

    const FittedModel narrow = fit_linear_gaussian(DesignMatrix(x), y);
    const FittedModel wide = fit_linear_gaussian(DesignMatrix(wider), y);
    CHECK(wide.loglik >= narrow.loglik - 1e-9 * std::abs(narrow.loglik));
  }
}

TEST_CASE("zero-residual observation has zero Cook's distance") {
  // mean of (1, 2, 3, 2) is exactly 2, so observations 1 and 3 sit on it
  Eigen::VectorXd y(4);
  y << 1.0, 2.0, 3.0, 2.0;
  const Eigen::VectorXd d = cooks_distance(intercept_only(4), y);
  CHECK(d(1) == 0.0);
  CHECK(d(3) == 0.0);
  CHECK(d(0) > 0.0);
}

TEST_CASE("identical observations get identical Cook's distances") {
  Eigen::MatrixXd x(6, 2);
  x << 1, 0.5, 1, 2.0, 1, 3.5, 1, 0.5, 1, 5.0, 1, 1.5;
  Eigen::VectorXd y(6);
  y << 1.0, 2.5, 3.0, 1.0, 4.5, 2.0;
  const Eigen::VectorXd d = cooks_distance(DesignMatrix(x), y);
  CHECK(d(0) == doctest::Approx(d(3)).epsilon(1e-12));
}

TEST_CASE("Cook's distance matches the leave-one-out refit definition") {
  SplitMix64 rng(2104);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 6 + static_cast<int>(rng.next_below(7));  // n <= 12
    const int p = 1 + static_cast<int>(rng.next_below(3));
    const Eigen::MatrixXd x = random_design(rng, n, p);
    const Eigen::VectorXd y = random_response(rng, n);

    const Eigen::VectorXd d = cooks_distance(DesignMatrix(x), y);

    // brute-force oracle: D_i = sum_j (yhat_j - yhat_j^{(i)})^2 / (p s^2)
    const Eigen::VectorXd beta = normal_equations(x, y);
    const Eigen::VectorXd fitted = x * beta;
    const double s2 = (y - fitted).squaredNorm() / static_cast<double>(n - p);
    for (int i = 0; i < n; ++i) {
      Eigen::MatrixXd xi(n - 1, p);
      Eigen::VectorXd yi(n - 1);
      int r = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        xi.row(r) = x.row(j);
        yi(r) = y(j);
        ++r;
      }
      const Eigen::VectorXd beta_i = normal_equations(xi, yi);
      const double oracle =
          (fitted - x * beta_i).squaredNorm() / (static_cast<double>(p) * s2);
      CHECK(std::abs(d(i) - oracle) <= 1e-8 * std::max(1.0, oracle));
    }
  }
}

TEST_CASE("leverage-one observation is rejected") {
  // the second column isolates observation 0, giving it leverage 1
  Eigen::MatrixXd x(3, 2);
  x << 1, 1, 1, 0, 1, 0;
  Eigen::VectorXd y(3);
  y << 5.0, 1.0, 2.0;
  CHECK_THROWS_AS(cooks_distance(DesignMatrix(x), y), LeverageOne);
}
