#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "permsel/linear_model.hpp"

namespace permsel {

/// Monte-Carlo forecast of the next-year population count.
struct PopulationForecast {
  std::vector<double> samples;  ///< simulated next-year counts, all > 0
  double kde_bandwidth = 0.0;   ///< > 0
  double origin_count = 0.0;    ///< count the forecast starts from
};

inline constexpr int kDefaultForecastSamples = 10000;

/// Silverman's rule of thumb, h = 0.9 min(sd, IQR/1.34) S^{-1/5}.
/// Returns 0 when the spread is degenerate (S < 2 or zero spread).
double silverman_bandwidth(std::span<const double> samples);

/// Simulates S next-year counts origin * exp(R*) with
/// R* ~ N(predictor_row . coefficients, sigma2). Sample j is drawn from
/// its own substream of `seed`, so the sample set does not depend on
/// evaluation order. Bandwidth defaults to Silverman's rule.
PopulationForecast monte_carlo_forecast(
    const FittedModel& fitted, const Eigen::VectorXd& predictor_row,
    double origin_count, int sample_count = kDefaultForecastSamples,
    std::uint64_t seed = 0,
    std::optional<double> bandwidth_override = std::nullopt);

/// Gaussian-kernel density estimate at x:
/// (1 / (S h)) sum_j phi((x - s_j) / h).
double kde_density(const PopulationForecast& forecast, double x);

}  // namespace permsel
