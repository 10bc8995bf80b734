#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "permsel/csv_io.hpp"
#include "permsel/dataset.hpp"
#include "permsel/experiment1.hpp"
#include "permsel/permutation_test.hpp"
#include "permsel/run_config.hpp"
#include "permsel/scoring.hpp"

namespace permsel {

enum class RunMode {
  Fit,       ///< score tables only
  PermTest,  ///< + per-model single-model permutation tests
  Select,    ///< + model-selection permutation test
};

/// Everything a `fit` / `permtest` / `select` invocation needs.
struct RunConfig {
  std::filesystem::path dataset_path;
  std::filesystem::path model_config_path;
  std::vector<StatKind> kinds{StatKind::Aic};
  RunMode mode = RunMode::Select;
  int permutations = 10000;
  bool exhaustive = false;  ///< complete derangement set instead of sampling
  std::uint64_t seed = 0;
  int threads = 1;
  bool emit_ecdf = false;
  bool westfall_young = false;
  std::filesystem::path output_dir;  ///< empty: no files written
};

struct ModelFitSummary {
  std::string model_id;
  std::vector<double> coefficients;
  double sigma2 = 0.0;
  double loglik = 0.0;
  int n_obs = 0;
  int k_params = 0;
  std::string error;  ///< non-empty when the model failed to fit
};

/// Results for one statistic kind.
struct KindResults {
  StatKind kind = StatKind::Aic;
  double null_value = 0.0;  ///< reference statistic the deltas are against
  std::vector<ScoreTableRow> table;
  std::optional<PermTestResult> selection;
  std::map<std::string, double> wy_adjusted;  ///< by model id
};

/// Complete, reproducible output of one run: rerunning with the
/// provenance block's seed/config reproduces every number.
struct ResultsBundle {
  std::vector<KindResults> per_kind;
  std::vector<ModelFitSummary> fits;
  std::vector<std::string> warnings;

  // provenance
  std::string tool_version;
  RunMode mode = RunMode::Select;
  std::vector<StatKind> kinds;
  std::uint64_t seed = 0;
  int permutations = 0;
  bool exhaustive = false;
  bool add_one_pvalue = false;
  AiccConvention aicc_convention = AiccConvention::Standard;
  std::string dataset_file;
  std::string model_config_file;
  std::uint64_t dataset_hash = 0;
  std::uint64_t config_hash = 0;
};

/// FNV-1a 64-bit hash (provenance fingerprints).
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Runs score tables, per-model single-model permutation tests and the
/// model-selection permutation test, per requested statistic kind.
/// Null-family models serve as the table reference; they get no p-value
/// and do not enter the selection minimum. Models that fail to fit are
/// annotated in the table and the run continues.
ResultsBundle run_selection(const RunConfig& config,
                            const TimeSeriesDataset& dataset,
                            const ModelSetConfig& model_config);

/// Convenience overload that loads the dataset and model config from the
/// paths in `config`.
ResultsBundle run_selection(const RunConfig& config);

std::string render_score_table_text(const KindResults& results);
std::string score_table_csv(const KindResults& results);
std::string ecdf_csv(const KindResults& results);
std::string bundle_to_json(const ResultsBundle& bundle);

/// Writes bundle.json, per-kind score tables (.csv and .txt), optional
/// ECDF CSVs, the normalized dataset and the resolved model config into
/// `dir`. Output bytes are a pure function of (inputs, seed, config).
void write_bundle(const ResultsBundle& bundle, const TimeSeriesDataset& dataset,
                  const ModelSetConfig& model_config,
                  const std::filesystem::path& dir);

std::string experiment_grid_csv(std::span<const Experiment1GridRow> rows);
std::string experiment_grid_text(std::span<const Experiment1GridRow> rows);

/// Writes experiment1.csv, experiment1.txt and experiment1.json
/// (provenance included) into `dir`.
void write_experiment_outputs(const Experiment1Config& base,
                              std::span<const Experiment1GridRow> rows,
                              const std::filesystem::path& dir);

}  // namespace permsel
