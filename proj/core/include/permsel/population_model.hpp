#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "permsel/dataset.hpp"
#include "permsel/linear_model.hpp"

namespace permsel {

/// How the lagged population count enters the regression: raw (Ricker),
/// log-transformed (Gompertz), or not at all (Null, intercept only).
enum class ModelFamily { Ricker, Gompertz, Null };

const char* family_name(ModelFamily family) noexcept;

/// Reserved series name that refers to the (family-transformed) lagged
/// population count inside interaction terms.
inline constexpr const char* kDensityName = "density";

/// One candidate model: family plus covariate/interaction selection.
struct ModelSpec {
  std::string id;
  ModelFamily family = ModelFamily::Null;
  std::vector<std::string> covariate_names;
  /// Product terms; members name a covariate or kDensityName.
  std::vector<std::pair<std::string, std::string>> interactions;
  bool include_density = false;
  /// Overrides the k_params convention (coefficients + 1) in the
  /// information criteria when set.
  std::optional<int> k_override;

  bool is_null() const noexcept { return family == ModelFamily::Null; }

  /// Null family must have no covariates, no interactions and
  /// include_density == false. Throws ConfigError.
  void validate() const;
};

ModelSpec null_model_spec(std::string id = "null");

/// R_i = ln(n_{i+1} / n_i) for i = 0..n-2. Throws NonPositiveCount,
/// TooFewRows.
std::vector<double> relative_change(const TimeSeriesDataset& dataset);

struct DesignResponse {
  DesignMatrix design;
  Eigen::VectorXd response;
};

/// Builds the regression of the relative population change on the spec's
/// predictors. Row i covers the transition out of year i, so the density
/// term and covariates are taken at year i. Column order: intercept,
/// density (when included), covariates in spec order, interactions last.
DesignResponse build_design(const ModelSpec& spec,
                            const TimeSeriesDataset& dataset);

}  // namespace permsel
