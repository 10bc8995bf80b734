#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "permsel/scoring.hpp"

namespace permsel {

/// Candidate-model structure for the type-I-error simulation: either n
/// mutually independent single-predictor regressions, or n distinct
/// non-empty subsets of k shared predictor variables.
struct Experiment1Case {
  enum class Kind { Independent, Dependent };
  Kind kind = Kind::Independent;
  int n_models = 1;
  int k = 0;  ///< number of shared predictors (Dependent only)
};

struct Experiment1Config {
  int n_outcomes = 20;
  int repeats = 256;
  double alpha = 0.05;
  int permutations = 512;
  Experiment1Case model_case{};
  std::uint64_t seed = 0;
  int threads = 1;
  AiccConvention aicc_convention = AiccConvention::Standard;
};

struct Experiment1Result {
  /// Fraction of repeats in which the AICc-best model's single-model
  /// permutation p-value fell below alpha.
  double naive_reject_rate = 0.0;
  /// Fraction of repeats in which the model-selection permutation test
  /// rejected at alpha.
  double selection_test_reject_rate = 0.0;
  /// Central 95% interval for a Binomial(repeats, alpha) proportion.
  std::pair<double, double> binomial_band{0.0, 0.0};
  int naive_reject_count = 0;
  int selection_reject_count = 0;
  int repeats = 0;
};

/// alpha +- 1.96 sqrt(alpha (1 - alpha) / repeats), clipped to [0, 1].
std::pair<double, double> binomial_band(int repeats, double alpha);

/// One experiment cell: draws outcomes and predictors iid N(0,1) per
/// repeat (so no model has any predictive value), selects the best model
/// by AICc, and runs both the naive single-model test on the best model
/// and the model-selection test, sharing one permutation set per repeat.
/// Repeats run in parallel on derived seeds; results do not depend on
/// the thread count.
Experiment1Result run_experiment1(const Experiment1Config& config);

struct Experiment1GridRow {
  int n_models = 0;
  Experiment1Result result;
};

/// Runs one cell per entry of the n_models grid, holding everything else
/// in `base` fixed.
std::vector<Experiment1GridRow> run_experiment1_grid(
    const Experiment1Config& base, std::span<const int> n_models_grid);

inline constexpr std::array<int, 6> kDefaultExperiment1Grid{1, 2, 3, 7, 15, 31};

}  // namespace permsel
