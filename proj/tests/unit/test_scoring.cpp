#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "permsel/errors.hpp"
#include "permsel/rng.hpp"
#include "permsel/scoring.hpp"

using namespace permsel;

TEST_CASE("aic direct substitution") {
  CHECK(aic(0.0, 2) == 4.0);
  CHECK(aic(-10.0, 3) == 26.0);
  CHECK_THROWS_AS(aic(0.0, 0), ConfigError);
}

TEST_CASE("aicc under the standard convention") {
  // 26 + 2*3*4 / 16 = 27.5
  CHECK(aicc(-10.0, 3, 20) == doctest::Approx(27.5).epsilon(1e-14));
  CHECK_THROWS_AS(aicc(-10.0, 3, 4), SmallSample);
  CHECK(std::abs(aicc(-10.0, 3, 1000000) - aic(-10.0, 3)) < 1e-4);
}

TEST_CASE("aicc correction-only convention drops the +2K term") {
  CHECK(aicc(-10.0, 3, 20, AiccConvention::CorrectionOnly) ==
        doctest::Approx(21.5).epsilon(1e-14));
}

TEST_CASE("aicc exceeds aic and the gap shrinks with n") {
  double previous_gap = std::numeric_limits<double>::infinity();
  for (int n = 6; n <= 120; ++n) {
    const double gap = aicc(-5.0, 3, n) - aic(-5.0, 3);
    CHECK(gap > 0.0);
    CHECK(gap < previous_gap);
    previous_gap = gap;
  }
}

TEST_CASE("ignorance score basics") {
  CHECK(ignorance(0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ignorance(1.0) == 0.0);
  // density of a standard Gaussian at its mean
  CHECK(ignorance(1.0 / std::sqrt(2.0 * std::numbers::pi)) ==
        doctest::Approx(1.3257480647361592).epsilon(1e-12));
  CHECK_THROWS_AS(ignorance(0.0), ZeroDensity);
  CHECK_THROWS_AS(ignorance(-0.2), ZeroDensity);
}

TEST_CASE("gaussian ignorance agrees with the density route and survives tails") {
  CHECK(gaussian_ignorance_bits(0.0, 0.0, 1.0) ==
        doctest::Approx(ignorance(1.0 / std::sqrt(2.0 * std::numbers::pi)))
            .epsilon(1e-12));
  const double far = gaussian_ignorance_bits(1e5, 0.0, 1.0);
  CHECK(std::isfinite(far));
  CHECK(far > 1e9);  // the density itself would underflow to zero
  CHECK_THROWS_AS(gaussian_ignorance_bits(0.0, 0.0, 0.0), ZeroDensity);
}

TEST_CASE("leave-one-out mean ignorance: three-fold hand computation") {
  // intercept-only on y = (0, 1, 3); fold means/variances are
  // (2, 1), (1.5, 2.25), (0.5, 0.25)
  Eigen::VectorXd y(3);
  y << 0.0, 1.0, 3.0;
  const DesignMatrix design(Eigen::MatrixXd::Ones(3, 1));
  const double got = loo_cv_mean_ignorance(design, y);

  const double ln2 = std::numbers::ln2;
  auto fold = [&](double outcome, double mean, double var) {
    return (0.5 * std::log(2.0 * std::numbers::pi * var) +
            (outcome - mean) * (outcome - mean) / (2.0 * var)) /
           ln2;
  };
  const double expected =
      (fold(0.0, 2.0, 1.0) + fold(1.0, 1.5, 2.25) + fold(3.0, 0.5, 0.25)) / 3.0;
  CHECK(got == doctest::Approx(expected).epsilon(1e-12));
  CHECK(got == doctest::Approx(8.187144837437812).epsilon(1e-9));
}

TEST_CASE("degenerate folds abort the cross-validated score") {
  const DesignMatrix design(Eigen::MatrixXd::Ones(3, 1));
  Eigen::VectorXd constant(3);
  constant << 2.0, 2.0, 2.0;
  CHECK_THROWS_AS(loo_cv_mean_ignorance(design, constant), FoldPerfectFit);

  // leaving out the single distinct value leaves a zero-variance fold
  Eigen::VectorXd nearly(3);
  nearly << 0.0, 0.0, 1.0;
  CHECK_THROWS_AS(loo_cv_mean_ignorance(design, nearly), FoldPerfectFit);
}

TEST_CASE("leave-one-out needs enough rows for every fold") {
  const DesignMatrix design(Eigen::MatrixXd::Ones(2, 1));
  Eigen::VectorXd y(2);
  y << 0.0, 1.0;
  CHECK_THROWS_AS(loo_cv_mean_ignorance(design, y), TooFewRows);
}

TEST_CASE("scaling densities by 2^c shifts mean ignorance by -c") {
  const std::vector<double> densities{0.03, 0.4, 1.7, 0.25, 0.9};
  const double c = 3.0;
  double base = 0.0;
  double shifted = 0.0;
  for (double d : densities) {
    base += ignorance(d);
    shifted += ignorance(d * 8.0);
  }
  base /= static_cast<double>(densities.size());
  shifted /= static_cast<double>(densities.size());
  CHECK(shifted == doctest::Approx(base - c).epsilon(1e-12));
}

TEST_CASE("ignorance is empirically proper for Gaussian forecasts") {
  // outcomes from N(0,1); the true forecast must beat a shifted and a
  // flattened competitor by >= 3 standard errors (paired)
  const int samples = 100000;
  SplitMix64 rng(515151);
  double sum_shift = 0.0, sumsq_shift = 0.0;
  double sum_wide = 0.0, sumsq_wide = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = rng.next_gaussian();
    const double true_score = gaussian_ignorance_bits(x, 0.0, 1.0);
    const double d_shift = gaussian_ignorance_bits(x, 0.5, 1.0) - true_score;
    const double d_wide = gaussian_ignorance_bits(x, 0.0, 4.0) - true_score;
    sum_shift += d_shift;
    sumsq_shift += d_shift * d_shift;
    sum_wide += d_wide;
    sumsq_wide += d_wide * d_wide;
  }
  const double n = samples;
  const double mean_shift = sum_shift / n;
  const double se_shift =
      std::sqrt((sumsq_shift / n - mean_shift * mean_shift) / n);
  const double mean_wide = sum_wide / n;
  const double se_wide = std::sqrt((sumsq_wide / n - mean_wide * mean_wide) / n);
  CHECK(mean_shift > 3.0 * se_shift);
  CHECK(mean_wide > 3.0 * se_wide);
}

TEST_CASE("AIC ranks like the log-likelihood when K is shared") {
  SplitMix64 rng(99);
  const int n = 14;
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y(i) = rng.next_gaussian();

  std::vector<double> logliks;
  std::vector<double> aics;
  for (int m = 0; m < 5; ++m) {
    Eigen::MatrixXd x(n, 2);
    for (int i = 0; i < n; ++i) {
      x(i, 0) = 1.0;
      x(i, 1) = rng.next_gaussian();
    }
    const FittedModel fit = fit_linear_gaussian(DesignMatrix(x), y);
    logliks.push_back(fit.loglik);
    aics.push_back(aic(fit.loglik, fit.k_params));
  }
  for (std::size_t a = 0; a < aics.size(); ++a) {
    for (std::size_t b = 0; b < aics.size(); ++b) {
      CHECK((aics[a] < aics[b]) == (logliks[a] > logliks[b]));
    }
  }
}

TEST_CASE("k_override shifts the penalty exactly") {
  SplitMix64 rng(100);
  const int n = 12;
  Eigen::MatrixXd x(n, 2);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = rng.next_gaussian();
    y(i) = rng.next_gaussian();
  }
  const DesignMatrix design(x);
  const double base = evaluate_statistic(design, y, StatKind::Aic);
  const double overridden = evaluate_statistic(design, y, StatKind::Aic, 7);
  // default K is cols + 1 = 3
  CHECK(overridden - base == doctest::Approx(2.0 * (7 - 3)).epsilon(1e-12));
}
