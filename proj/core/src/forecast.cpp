#include "permsel/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "permsel/errors.hpp"
#include "permsel/rng.hpp"

namespace permsel {

namespace {

// Linear-interpolation quantile on a sorted copy.
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

double silverman_bandwidth(std::span<const double> samples) {
  const std::size_t s = samples.size();
  if (s < 2) return 0.0;

  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(s);
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(s - 1));

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);

  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) spread = sd;  // point-mass quartiles, fall back to sd
  if (spread <= 0.0) return 0.0;
  return 0.9 * spread * std::pow(static_cast<double>(s), -0.2);
}

PopulationForecast monte_carlo_forecast(const FittedModel& fitted,
                                        const Eigen::VectorXd& predictor_row,
                                        double origin_count, int sample_count,
                                        std::uint64_t seed,
                                        std::optional<double> bandwidth_override) {
  if (sample_count < 1) throw ConfigError("forecast sample count must be >= 1");
  if (!(origin_count > 0.0)) {
    throw NonPositiveCount("forecast origin count must be positive");
  }
  if (predictor_row.size() != fitted.coefficients.size()) {
    throw LengthMismatch("predictor row length does not match coefficients");
  }

  const double mu = predictor_row.dot(fitted.coefficients);
  const double sd = std::sqrt(fitted.sigma2);

  PopulationForecast forecast;
  forecast.origin_count = origin_count;
  forecast.samples.resize(static_cast<std::size_t>(sample_count));
  for (int j = 0; j < sample_count; ++j) {
    SplitMix64 stream(substream_seed(seed, static_cast<std::uint64_t>(j)));
    const double r = mu + sd * stream.next_gaussian();
    forecast.samples[static_cast<std::size_t>(j)] = origin_count * std::exp(r);
  }

  double h = bandwidth_override.value_or(silverman_bandwidth(forecast.samples));
  if (!(h > 0.0)) {
    // zero-spread sample set; any positive width gives a usable kernel
    h = 1e-6 * std::max(1.0, std::abs(forecast.samples.front()));
  }
  forecast.kde_bandwidth = h;
  return forecast;
}

double kde_density(const PopulationForecast& forecast, double x) {
  const double h = forecast.kde_bandwidth;
  if (!(h > 0.0)) throw ConfigError("KDE bandwidth must be positive");
  if (!std::isfinite(x)) throw DataError("KDE query point must be finite");

  const double inv_norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  double sum = 0.0;
  for (double s : forecast.samples) {
    const double t = (x - s) / h;
    sum += inv_norm * std::exp(-0.5 * t * t);
  }
  return sum / (static_cast<double>(forecast.samples.size()) * h);
}

}  // namespace permsel
