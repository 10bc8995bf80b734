#pragma once

#include <Eigen/Dense>

#include "permsel/errors.hpp"

namespace permsel {

/// Regressor matrix, intercept column included. Values are kept in the
/// covariates' native units.
class DesignMatrix {
 public:
  /// Throws DataError unless the matrix is at least 1x1 with finite entries.
  explicit DesignMatrix(Eigen::MatrixXd values);

  Eigen::Index rows() const noexcept { return values_.rows(); }
  Eigen::Index cols() const noexcept { return values_.cols(); }
  const Eigen::MatrixXd& matrix() const noexcept { return values_; }

 private:
  Eigen::MatrixXd values_;
};

/// Maximum-likelihood Gaussian linear model fit.
struct FittedModel {
  Eigen::VectorXd coefficients;
  double sigma2 = 0.0;  ///< residual variance, MLE (RSS / n)
  double loglik = 0.0;  ///< natural-log likelihood at the maximum
  int n_obs = 0;
  int k_params = 0;  ///< coefficients + 1 for the variance
};

/// Smallest R diagonal below this fraction of the largest flags the design
/// as rank deficient.
inline constexpr double kRankTolerance = 1e-10;

/// RSS/n below this fraction of var(y) means the likelihood is unbounded.
inline constexpr double kPerfectFitTolerance = 1e-12;

/// Gaussian log-likelihood at the MLE, from the residual sum of squares.
double gaussian_loglik_from_rss(double rss, Eigen::Index n);

/// Ordinary least squares via column-pivoted Householder QR.
///
/// Throws LengthMismatch, RankDeficient or PerfectFit.
FittedModel fit_linear_gaussian(const DesignMatrix& design,
                                const Eigen::VectorXd& y);

/// Cook's distance of every observation,
/// D_i = e_i^2 / (p s^2) * h_i / (1 - h_i)^2 with s^2 the unbiased
/// residual variance and h_i the leverage.
///
/// Throws LeverageOne when some h_i is numerically 1, plus everything
/// fit_linear_gaussian throws.
Eigen::VectorXd cooks_distance(const DesignMatrix& design,
                               const Eigen::VectorXd& y);

}  // namespace permsel
