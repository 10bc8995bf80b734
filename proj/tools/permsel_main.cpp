#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "permsel/pipeline.hpp"
#include "permsel/version.hpp"

namespace {

int default_threads() {
  if (const char* env = std::getenv("PERMSEL_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed >= 1) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<permsel::StatKind> to_kinds(const std::vector<std::string>& names) {
  std::vector<permsel::StatKind> kinds;
  for (const std::string& name : names) {
    const auto kind = permsel::stat_kind_from_name(name);
    if (!kind) throw permsel::ConfigError("unknown statistic '" + name + "'");
    if (std::find(kinds.begin(), kinds.end(), *kind) == kinds.end()) {
      kinds.push_back(*kind);
    }
  }
  return kinds;
}

struct SelectionArgs {
  std::string data_path;
  std::string models_path;
  std::vector<std::string> statistics{"aic"};
  std::string out_dir;
  std::uint64_t seed = 0;
  int permutations = 10000;
  bool exhaustive = false;
  int threads = default_threads();
  bool ecdf = false;
  bool westfall_young = false;
};

void add_selection_options(CLI::App& cmd, SelectionArgs& args,
                           bool with_perm_options) {
  cmd.add_option("--data", args.data_path, "dataset CSV (year,count,covariates)")
      ->required();
  cmd.add_option("--models", args.models_path, "model set JSON config")
      ->required();
  cmd.add_option("--statistic", args.statistics,
                 "selection statistic (repeatable)")
      ->check(CLI::IsMember({"aic", "aicc", "cv-ign"}));
  cmd.add_option("--out", args.out_dir, "output directory for result files");
  cmd.add_option("--threads", args.threads, "worker threads");
  cmd.add_option("--seed", args.seed, "master RNG seed");
  cmd.add_option("--permutations", args.permutations,
                 "number of sampled derangements (J)");
  if (with_perm_options) {
    cmd.add_flag("--exhaustive", args.exhaustive,
                 "use the complete derangement set (small n only)");
  }
}

int run_selection_command(const SelectionArgs& args, permsel::RunMode mode) {
  permsel::RunConfig config;
  config.dataset_path = args.data_path;
  config.model_config_path = args.models_path;
  config.kinds = to_kinds(args.statistics);
  config.mode = mode;
  config.permutations = args.permutations;
  config.exhaustive = args.exhaustive;
  config.seed = args.seed;
  config.threads = args.threads;
  config.emit_ecdf = args.ecdf;
  config.westfall_young = args.westfall_young;
  if (!args.out_dir.empty()) config.output_dir = args.out_dir;

  const permsel::TimeSeriesDataset dataset =
      permsel::ingest_csv(config.dataset_path);
  const permsel::ModelSetConfig model_config =
      permsel::parse_model_config(config.model_config_path);
  const permsel::ResultsBundle bundle =
      permsel::run_selection(config, dataset, model_config);

  for (const std::string& warning : bundle.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  for (const permsel::KindResults& results : bundle.per_kind) {
    std::cout << permsel::render_score_table_text(results) << "\n";
  }
  if (!config.output_dir.empty()) {
    permsel::write_bundle(bundle, dataset, model_config, config.output_dir);
    std::cout << "results written to " << config.output_dir.string() << "\n";
  }
  return 0;
}

struct ExperimentArgs {
  std::string case_name = "independent";
  int k = 4;
  std::vector<int> n_models;
  int outcomes = 20;
  int repeats = 256;
  double alpha = 0.05;
  int permutations = 512;
  std::uint64_t seed = 0;
  int threads = default_threads();
  std::string out_dir;
};

int run_experiment_command(const ExperimentArgs& args) {
  permsel::Experiment1Config config;
  config.n_outcomes = args.outcomes;
  config.repeats = args.repeats;
  config.alpha = args.alpha;
  config.permutations = args.permutations;
  config.seed = args.seed;
  config.threads = args.threads;
  config.model_case.kind = args.case_name == "dependent"
                               ? permsel::Experiment1Case::Kind::Dependent
                               : permsel::Experiment1Case::Kind::Independent;
  config.model_case.k = args.k;

  std::vector<int> grid = args.n_models;
  if (grid.empty()) {
    grid.assign(permsel::kDefaultExperiment1Grid.begin(),
                permsel::kDefaultExperiment1Grid.end());
  }

  const std::vector<permsel::Experiment1GridRow> rows =
      permsel::run_experiment1_grid(config, grid);
  std::cout << permsel::experiment_grid_text(rows);
  if (!args.out_dir.empty()) {
    permsel::write_experiment_outputs(config, rows, args.out_dir);
    std::cout << "results written to " << args.out_dir << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"permutation tests for model selection in population "
               "time-series modelling"};
  app.set_version_flag("--version", std::string(permsel::kVersion));
  app.require_subcommand(1);

  SelectionArgs fit_args;
  CLI::App* fit = app.add_subcommand(
      "fit", "score a model set (information criteria / cross-validated "
             "ignorance), no permutation tests");
  add_selection_options(*fit, fit_args, false);

  SelectionArgs permtest_args;
  CLI::App* permtest = app.add_subcommand(
      "permtest", "single-model permutation test for every model");
  add_selection_options(*permtest, permtest_args, true);
  permtest->add_flag("--westfall-young", permtest_args.westfall_young,
                     "also compute Westfall-Young adjusted p-values");

  SelectionArgs select_args;
  CLI::App* select = app.add_subcommand(
      "select", "full pipeline: score table, per-model tests and the "
                "model-selection permutation test");
  add_selection_options(*select, select_args, true);
  select->add_flag("--ecdf", select_args.ecdf,
                   "emit the ECDF of the per-permutation best statistic");
  select->add_flag("--westfall-young", select_args.westfall_young,
                   "also compute Westfall-Young adjusted p-values");

  ExperimentArgs exp_args;
  CLI::App* experiment =
      app.add_subcommand("experiment1", "type-I-error inflation simulation");
  experiment->add_option("--case", exp_args.case_name, "model structure")
      ->check(CLI::IsMember({"independent", "dependent"}));
  experiment->add_option("--k", exp_args.k,
                         "shared predictor variables (dependent case)");
  experiment->add_option("--n-models", exp_args.n_models,
                         "candidate-set sizes to sweep (repeatable)");
  experiment->add_option("--outcomes", exp_args.outcomes, "outcomes per repeat");
  experiment->add_option("--repeats", exp_args.repeats, "simulation repeats");
  experiment->add_option("--alpha", exp_args.alpha, "significance level");
  experiment->add_option("--permutations", exp_args.permutations,
                         "permutations per inner test (J)");
  experiment->add_option("--seed", exp_args.seed, "master RNG seed");
  experiment->add_option("--threads", exp_args.threads, "worker threads");
  experiment->add_option("--out", exp_args.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (fit->parsed()) return run_selection_command(fit_args, permsel::RunMode::Fit);
    if (permtest->parsed()) {
      return run_selection_command(permtest_args, permsel::RunMode::PermTest);
    }
    if (select->parsed()) {
      return run_selection_command(select_args, permsel::RunMode::Select);
    }
    if (experiment->parsed()) return run_experiment_command(exp_args);
  } catch (const permsel::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const permsel::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const permsel::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 4;
  } catch (const permsel::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
