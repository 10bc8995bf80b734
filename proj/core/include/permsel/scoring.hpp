#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "permsel/linear_model.hpp"
#include "permsel/population_model.hpp"

namespace permsel {

/// Model selection statistics. All are negatively oriented: smaller is
/// better. Values of different kinds are never comparable.
enum class StatKind { Aic, Aicc, CvMeanIgnorance, NegLogLik };

std::string_view stat_kind_name(StatKind kind) noexcept;
std::optional<StatKind> stat_kind_from_name(std::string_view name) noexcept;

/// AICc = AIC + 2K(K+1)/(n-K-1) is the textbook definition (Standard).
/// CorrectionOnly drops the +2K penalty from the AIC part, i.e.
/// -2 loglik + 2K(K+1)/(n-K-1); both are selectable so either convention
/// of published tables can be reproduced.
enum class AiccConvention { Standard, CorrectionOnly };

struct SelectionStatistic {
  StatKind kind = StatKind::Aic;
  double value = 0.0;
};

/// -2 loglik + 2k (natural log).
double aic(double loglik, int k);

/// Small-sample corrected AIC; throws SmallSample when n - k - 1 < 1.
double aicc(double loglik, int k, int n,
            AiccConvention convention = AiccConvention::Standard);

/// Ignorance score -log2(density), in bits. Throws ZeroDensity.
double ignorance(double density_at_outcome);

/// Ignorance of a Gaussian N(mean, variance) forecast at `outcome`,
/// evaluated in log space so extreme outcomes do not underflow.
double gaussian_ignorance_bits(double outcome, double mean, double variance);

/// Leave-one-out cross-validated mean ignorance: each row is held out
/// once, the model refit on the rest, and the held-out outcome scored
/// against the fold's Gaussian predictive density N(yhat_i, sigma2_fold).
/// Folds are averaged in index order. A fold that cannot be fit aborts
/// the score (FoldPerfectFit / FoldRankDeficient); silently skipping
/// folds would bias comparisons between models.
double loo_cv_mean_ignorance(const DesignMatrix& design,
                             const Eigen::VectorXd& y);

struct ScoreOptions {
  AiccConvention aicc_convention = AiccConvention::Standard;
};

/// Evaluates one statistic kind for a prepared design/response pair.
/// k_override replaces the fitted parameter count in the penalties.
double evaluate_statistic(const DesignMatrix& design, const Eigen::VectorXd& y,
                          StatKind kind,
                          std::optional<int> k_override = std::nullopt,
                          const ScoreOptions& options = {});

/// One row of a model selection table, expressed relative to the null
/// model as published tables usually are.
struct ScoreTableRow {
  std::string model_id;
  SelectionStatistic statistic{};
  double delta_vs_null = 0.0;
  std::optional<double> p_value;  ///< filled by the permutation pipeline
  std::string error;              ///< non-empty when the model failed to fit

  bool failed() const noexcept { return !error.empty(); }
};

/// Scores every model and lists rows ascending by statistic (ties broken
/// by model id). The first Null-family spec is the reference; when none
/// is present an implicit "null" row is added. Models that fail to fit
/// are kept, marked with the error, and sorted after the scored rows.
std::vector<ScoreTableRow> build_score_table(const std::vector<ModelSpec>& models,
                                             const TimeSeriesDataset& dataset,
                                             StatKind kind,
                                             const ScoreOptions& options = {});

}  // namespace permsel
