#include "permsel/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "permsel/errors.hpp"

namespace permsel {

namespace {
constexpr double kLn2 = std::numbers::ln2;
}

std::string_view stat_kind_name(StatKind kind) noexcept {
  switch (kind) {
    case StatKind::Aic: return "aic";
    case StatKind::Aicc: return "aicc";
    case StatKind::CvMeanIgnorance: return "cv-ign";
    case StatKind::NegLogLik: return "neg-loglik";
  }
  return "?";
}

std::optional<StatKind> stat_kind_from_name(std::string_view name) noexcept {
  if (name == "aic") return StatKind::Aic;
  if (name == "aicc") return StatKind::Aicc;
  if (name == "cv-ign") return StatKind::CvMeanIgnorance;
  if (name == "neg-loglik") return StatKind::NegLogLik;
  return std::nullopt;
}

double aic(double loglik, int k) {
  if (k < 1) throw ConfigError("AIC parameter count must be >= 1");
  return -2.0 * loglik + 2.0 * static_cast<double>(k);
}

double aicc(double loglik, int k, int n, AiccConvention convention) {
  if (k < 1) throw ConfigError("AICc parameter count must be >= 1");
  if (n - k - 1 < 1) {
    std::ostringstream msg;
    msg << "AICc correction undefined for n = " << n << ", k = " << k
        << " (n - k - 1 < 1)";
    throw SmallSample(msg.str());
  }
  const double kd = static_cast<double>(k);
  const double correction = 2.0 * kd * (kd + 1.0) / static_cast<double>(n - k - 1);
  if (convention == AiccConvention::CorrectionOnly) {
    return -2.0 * loglik + correction;
  }
  return aic(loglik, k) + correction;
}

double ignorance(double density_at_outcome) {
  if (!(density_at_outcome > 0.0)) {
    throw ZeroDensity("ignorance is undefined for non-positive density");
  }
  return -std::log2(density_at_outcome);
}

double gaussian_ignorance_bits(double outcome, double mean, double variance) {
  if (!(variance > 0.0)) {
    throw ZeroDensity("Gaussian forecast needs positive variance");
  }
  const double log_density =
      -0.5 * std::log(2.0 * std::numbers::pi * variance) -
      (outcome - mean) * (outcome - mean) / (2.0 * variance);
  return -log_density / kLn2;
}

double loo_cv_mean_ignorance(const DesignMatrix& design,
                             const Eigen::VectorXd& y) {
  const Eigen::MatrixXd& x = design.matrix();
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (n != y.size()) {
    throw LengthMismatch("design and response lengths differ");
  }
  if (n - 1 < p + 1) {
    std::ostringstream msg;
    msg << "leave-one-out needs at least " << (p + 2) << " rows for " << p
        << " coefficients, got " << n;
    throw TooFewRows(msg.str());
  }

  Eigen::MatrixXd fold_x(n - 1, p);
  Eigen::VectorXd fold_y(n - 1);
  double total = 0.0;
  for (Eigen::Index held = 0; held < n; ++held) {
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == held) continue;
      fold_x.row(r) = x.row(i);
      fold_y(r) = y(i);
      ++r;
    }
    FittedModel fit;
    try {
      fit = fit_linear_gaussian(DesignMatrix(fold_x), fold_y);
    } catch (const PerfectFit& e) {
      std::ostringstream msg;
      msg << "fold " << held << ": " << e.what();
      throw FoldPerfectFit(msg.str());
    } catch (const RankDeficient& e) {
      std::ostringstream msg;
      msg << "fold " << held << ": " << e.what();
      throw FoldRankDeficient(msg.str());
    }
    const double predicted = x.row(held).dot(fit.coefficients);
    total += gaussian_ignorance_bits(y(held), predicted, fit.sigma2);
  }
  return total / static_cast<double>(n);
}

double evaluate_statistic(const DesignMatrix& design, const Eigen::VectorXd& y,
                          StatKind kind, std::optional<int> k_override,
                          const ScoreOptions& options) {
  if (kind == StatKind::CvMeanIgnorance) {
    return loo_cv_mean_ignorance(design, y);
  }
  const FittedModel fit = fit_linear_gaussian(design, y);
  const int k = k_override.value_or(fit.k_params);
  switch (kind) {
    case StatKind::Aic: return aic(fit.loglik, k);
    case StatKind::Aicc:
      return aicc(fit.loglik, k, fit.n_obs, options.aicc_convention);
    case StatKind::NegLogLik: return -fit.loglik;
    case StatKind::CvMeanIgnorance: break;
  }
  return 0.0;  // unreachable
}

std::vector<ScoreTableRow> build_score_table(const std::vector<ModelSpec>& models,
                                             const TimeSeriesDataset& dataset,
                                             StatKind kind,
                                             const ScoreOptions& options) {
  std::vector<ModelSpec> all = models;
  auto null_it = std::find_if(all.begin(), all.end(),
                              [](const ModelSpec& m) { return m.is_null(); });
  if (null_it == all.end()) {
    all.push_back(null_model_spec());
    null_it = std::prev(all.end());
  }

  // The reference fit must succeed; its statistic anchors every delta.
  const DesignResponse null_dr = build_design(*null_it, dataset);
  const double null_value =
      evaluate_statistic(null_dr.design, null_dr.response, kind,
                         null_it->k_override, options);

  std::vector<ScoreTableRow> rows;
  rows.reserve(all.size());
  for (const ModelSpec& spec : all) {
    ScoreTableRow row;
    row.model_id = spec.id;
    row.statistic.kind = kind;
    try {
      const DesignResponse dr = build_design(spec, dataset);
      row.statistic.value =
          evaluate_statistic(dr.design, dr.response, kind, spec.k_override,
                             options);
      row.delta_vs_null = row.statistic.value - null_value;
    } catch (const Error& e) {
      row.error = e.what();
      row.statistic.value = std::numeric_limits<double>::quiet_NaN();
      row.delta_vs_null = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(std::move(row));
  }

  std::sort(rows.begin(), rows.end(),
            [](const ScoreTableRow& a, const ScoreTableRow& b) {
              if (a.failed() != b.failed()) return b.failed();
              if (a.failed()) return a.model_id < b.model_id;
              if (a.statistic.value != b.statistic.value) {
                return a.statistic.value < b.statistic.value;
              }
              return a.model_id < b.model_id;
            });
  return rows;
}

}  // namespace permsel
