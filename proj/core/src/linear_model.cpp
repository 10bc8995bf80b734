#include "permsel/linear_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace permsel {

namespace {

struct QrFit {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd residuals;
  double rss = 0.0;
};

QrFit solve_least_squares(const DesignMatrix& design, const Eigen::VectorXd& y) {
  const Eigen::MatrixXd& x = design.matrix();
  if (x.rows() != y.size()) {
    std::ostringstream msg;
    msg << "design has " << x.rows() << " rows but response has " << y.size()
        << " values";
    throw LengthMismatch(msg.str());
  }
  if (!y.allFinite()) throw DataError("response contains non-finite values");

  QrFit fit{Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(x), {}, {}, 0.0};
  fit.qr.setThreshold(kRankTolerance);
  if (fit.qr.rank() < x.cols()) {
    throw RankDeficient("design matrix is rank deficient (collinear columns)");
  }
  fit.coefficients = fit.qr.solve(y);
  fit.residuals = y - x * fit.coefficients;
  fit.rss = fit.residuals.squaredNorm();

  const auto n = static_cast<double>(x.rows());
  const double mean = y.mean();
  const double var_y = (y.array() - mean).square().sum() / n;
  // With var(y) = 0 the only residual left is solver round-off, so the
  // zero-RSS condition needs a scale-aware epsilon.
  const bool perfect =
      var_y > 0.0 ? (fit.rss / n < kPerfectFitTolerance * var_y)
                  : (fit.rss / n <= kPerfectFitTolerance * kPerfectFitTolerance *
                                        (1.0 + mean * mean));
  if (perfect) {
    throw PerfectFit("residual sum of squares is numerically zero; "
                     "the likelihood is unbounded");
  }
  return fit;
}

}  // namespace

DesignMatrix::DesignMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw DataError("design matrix must have at least one row and one column");
  }
  if (!values_.allFinite()) {
    throw DataError("design matrix contains non-finite values");
  }
}

double gaussian_loglik_from_rss(double rss, Eigen::Index n) {
  const double sigma2 = rss / static_cast<double>(n);
  return -0.5 * static_cast<double>(n) *
         (std::log(2.0 * std::numbers::pi * sigma2) + 1.0);
}

FittedModel fit_linear_gaussian(const DesignMatrix& design,
                                const Eigen::VectorXd& y) {
  QrFit fit = solve_least_squares(design, y);
  const Eigen::Index n = design.rows();

  FittedModel out;
  out.coefficients = std::move(fit.coefficients);
  out.sigma2 = fit.rss / static_cast<double>(n);
  out.loglik = gaussian_loglik_from_rss(fit.rss, n);
  out.n_obs = static_cast<int>(n);
  out.k_params = static_cast<int>(design.cols()) + 1;
  return out;
}

Eigen::VectorXd cooks_distance(const DesignMatrix& design,
                               const Eigen::VectorXd& y) {
  QrFit fit = solve_least_squares(design, y);
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  if (n <= p) {
    throw LengthMismatch("Cook's distance needs more observations than "
                         "coefficients");
  }

  // Leverages are the squared row norms of the thin Q factor; column
  // pivoting does not change the column space.
  const Eigen::MatrixXd q_thin =
      fit.qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
  const double s2 = fit.rss / static_cast<double>(n - p);

  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double leverage = q_thin.row(i).squaredNorm();
    if (leverage >= 1.0 - 1e-10) {
      std::ostringstream msg;
      msg << "observation " << i << " has leverage 1; Cook's distance is "
          << "undefined";
      throw LeverageOne(msg.str());
    }
    const double e = fit.residuals(i);
    d(i) = e * e / (static_cast<double>(p) * s2) * leverage /
           ((1.0 - leverage) * (1.0 - leverage));
  }
  return d;
}

}  // namespace permsel
