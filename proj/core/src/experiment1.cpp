#include "permsel/experiment1.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "permsel/errors.hpp"
#include "permsel/parallel.hpp"
#include "permsel/permutation_test.hpp"
#include "permsel/rng.hpp"

namespace permsel {

std::pair<double, double> binomial_band(int repeats, double alpha) {
  if (repeats < 1) throw ConfigError("binomial band needs repeats >= 1");
  if (alpha < 0.0 || alpha > 1.0) {
    throw ConfigError("alpha must lie in [0, 1]");
  }
  const double half =
      1.96 * std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(repeats));
  return {std::max(0.0, alpha - half), std::min(1.0, alpha + half)};
}

namespace {

void validate(const Experiment1Config& config) {
  if (config.n_outcomes < 3) throw ConfigError("n_outcomes must be >= 3");
  if (config.repeats < 1) throw ConfigError("repeats must be >= 1");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw ConfigError("alpha must lie in (0, 1)");
  }
  if (config.permutations < 1) throw ConfigError("permutations must be >= 1");
  const Experiment1Case& c = config.model_case;
  if (c.n_models < 1) throw ConfigError("n_models must be >= 1");
  if (c.kind == Experiment1Case::Kind::Dependent) {
    if (c.k < 1 || c.k > 20) throw ConfigError("k must lie in 1..20");
    const auto max_models = (1LL << c.k) - 1;
    if (c.n_models > max_models) {
      std::ostringstream msg;
      msg << "n_models = " << c.n_models << " exceeds the " << max_models
          << " distinct non-empty combinations of k = " << c.k
          << " variables";
      throw ConfigError(msg.str());
    }
  }
}

struct RepeatOutcome {
  bool naive_reject = false;
  bool selection_reject = false;
};

RepeatOutcome run_repeat(const Experiment1Config& config, std::uint64_t repeat_seed) {
  const int n = config.n_outcomes;
  const Experiment1Case& c = config.model_case;
  SplitMix64 rng(repeat_seed);

  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y(i) = rng.next_gaussian();

  // Candidate designs: intercept plus the model's predictor columns, all
  // iid N(0,1) and independent of y, so no model carries information.
  std::vector<PreparedModel> models;
  models.reserve(static_cast<std::size_t>(c.n_models));
  if (c.kind == Experiment1Case::Kind::Independent) {
    for (int m = 0; m < c.n_models; ++m) {
      Eigen::MatrixXd x(n, 2);
      for (int i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = rng.next_gaussian();
      }
      models.push_back(
          PreparedModel{"m" + std::to_string(m), DesignMatrix(std::move(x)), {}});
    }
  } else {
    Eigen::MatrixXd shared(n, c.k);
    for (int v = 0; v < c.k; ++v) {
      for (int i = 0; i < n; ++i) shared(i, v) = rng.next_gaussian();
    }
    // distinct non-empty variable subsets, uniform without replacement
    std::vector<std::uint32_t> masks(static_cast<std::size_t>((1 << c.k) - 1));
    std::iota(masks.begin(), masks.end(), 1u);
    for (int m = 0; m < c.n_models; ++m) {
      const auto pick = static_cast<std::size_t>(m) +
                        static_cast<std::size_t>(rng.next_below(
                            masks.size() - static_cast<std::size_t>(m)));
      std::swap(masks[static_cast<std::size_t>(m)], masks[pick]);
    }
    masks.resize(static_cast<std::size_t>(c.n_models));
    std::sort(masks.begin(), masks.end());
    for (std::uint32_t mask : masks) {
      const int width = std::popcount(mask);
      Eigen::MatrixXd x(n, 1 + width);
      x.col(0).setOnes();
      int col = 1;
      for (int v = 0; v < c.k; ++v) {
        if (mask >> v & 1u) x.col(col++) = shared.col(v);
      }
      models.push_back(PreparedModel{"m" + std::to_string(mask),
                                     DesignMatrix(std::move(x)), {}});
    }
  }

  PermOptions options;
  options.threads = 1;  // parallelism lives at the repeat level
  options.scoring.aicc_convention = config.aicc_convention;
  const auto plan =
      PermutationPlan::sampled(config.permutations, rng.next());
  const PermStatMatrix matrix = perm_stat_matrix(
      std::span<const PreparedModel>(models), y, StatKind::Aicc, plan, options);

  // Best by AICc under the original ordering; the naive test reuses the
  // same permutation set, so the paired comparison is sharp.
  const auto best_it =
      std::min_element(matrix.observed.begin(), matrix.observed.end());
  const auto best = static_cast<std::size_t>(best_it - matrix.observed.begin());
  const double observed_best = *best_it;

  int naive_exceed = 0;
  int selection_exceed = 0;
  for (const auto& row : matrix.per_perm) {
    if (row[best] < matrix.observed[best]) ++naive_exceed;
    double best_perm = std::numeric_limits<double>::quiet_NaN();
    for (double v : row) {
      if (std::isnan(v)) continue;
      if (std::isnan(best_perm) || v < best_perm) best_perm = v;
    }
    if (best_perm < observed_best) ++selection_exceed;
  }
  const double j_total = static_cast<double>(matrix.permutation_count);
  RepeatOutcome outcome;
  outcome.naive_reject = naive_exceed / j_total < config.alpha;
  outcome.selection_reject = selection_exceed / j_total < config.alpha;
  return outcome;
}

}  // namespace

Experiment1Result run_experiment1(const Experiment1Config& config) {
  validate(config);

  std::vector<RepeatOutcome> outcomes(static_cast<std::size_t>(config.repeats));
  parallel_for(config.repeats, config.threads, [&](int r) {
    outcomes[static_cast<std::size_t>(r)] = run_repeat(
        config, substream_seed(config.seed, static_cast<std::uint64_t>(r)));
  });

  Experiment1Result result;
  result.repeats = config.repeats;
  for (const RepeatOutcome& o : outcomes) {
    result.naive_reject_count += o.naive_reject ? 1 : 0;
    result.selection_reject_count += o.selection_reject ? 1 : 0;
  }
  result.naive_reject_rate =
      static_cast<double>(result.naive_reject_count) / config.repeats;
  result.selection_test_reject_rate =
      static_cast<double>(result.selection_reject_count) / config.repeats;
  result.binomial_band = binomial_band(config.repeats, config.alpha);
  return result;
}

std::vector<Experiment1GridRow> run_experiment1_grid(
    const Experiment1Config& base, std::span<const int> n_models_grid) {
  std::vector<Experiment1GridRow> rows;
  rows.reserve(n_models_grid.size());
  for (int n_models : n_models_grid) {
    Experiment1Config cell = base;
    cell.model_case.n_models = n_models;
    rows.push_back(Experiment1GridRow{n_models, run_experiment1(cell)});
  }
  return rows;
}

}  // namespace permsel
