#include "permsel/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "permsel/errors.hpp"
#include "permsel/version.hpp"

namespace permsel {

namespace {

using Json = nlohmann::ordered_json;

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string fixed4(double v) {
  if (std::isnan(v)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::Fit: return "fit";
    case RunMode::PermTest: return "permtest";
    case RunMode::Select: return "select";
  }
  return "?";
}

Json perm_result_json(const PermTestResult& r) {
  Json node;
  node["observed_stat"] = r.observed_stat;
  node["permutations"] = r.permutation_count;
  node["exceed_count"] = r.exceed_count;
  node["p_value"] = r.p_value;
  node["failed_refits"] = r.failed_refit_count;
  return node;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write output file: " + path.string());
  out << text;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

ResultsBundle run_selection(const RunConfig& config,
                            const TimeSeriesDataset& dataset,
                            const ModelSetConfig& model_config) {
  if (config.kinds.empty()) throw ConfigError("no statistic kinds requested");
  if (!config.exhaustive && config.permutations < 1) {
    throw ConfigError("permutation count must be >= 1");
  }
  dataset.validate();
  for (const ModelSpec& spec : model_config.models) {
    for (const std::string& name : spec.covariate_names) {
      if (!dataset.covariates.contains(name)) {
        throw UnknownCovariate("model '" + spec.id + "': covariate '" + name +
                               "' is not a dataset column");
      }
    }
  }

  // Materialize the model list once so tables, tests and provenance agree
  // on the null reference.
  std::vector<ModelSpec> specs = model_config.models;
  const bool has_null =
      std::any_of(specs.begin(), specs.end(),
                  [](const ModelSpec& m) { return m.is_null(); });
  if (!has_null) specs.push_back(null_model_spec());

  ResultsBundle bundle;
  bundle.tool_version = kVersion;
  bundle.mode = config.mode;
  bundle.kinds = config.kinds;
  bundle.seed = config.seed;
  bundle.permutations = config.permutations;
  bundle.exhaustive = config.exhaustive;
  bundle.add_one_pvalue = model_config.add_one_pvalue;
  bundle.aicc_convention = model_config.aicc_convention;
  bundle.dataset_file = config.dataset_path.string();
  bundle.model_config_file = config.model_config_path.string();
  bundle.dataset_hash = fnv1a64(dataset_to_csv(dataset));
  bundle.config_hash = fnv1a64(model_config_to_json(model_config));

  // Per-model Gaussian fits, independent of the statistic kind.
  for (const ModelSpec& spec : specs) {
    ModelFitSummary summary;
    summary.model_id = spec.id;
    try {
      const DesignResponse dr = build_design(spec, dataset);
      const FittedModel fit = fit_linear_gaussian(dr.design, dr.response);
      summary.coefficients.assign(fit.coefficients.begin(),
                                  fit.coefficients.end());
      summary.sigma2 = fit.sigma2;
      summary.loglik = fit.loglik;
      summary.n_obs = fit.n_obs;
      summary.k_params = spec.k_override.value_or(fit.k_params);
    } catch (const Error& e) {
      summary.error = e.what();
    }
    bundle.fits.push_back(std::move(summary));
  }

  // Candidate set for the permutation tests: non-null models only. The
  // null statistic is invariant under any permutation of the outcomes,
  // so a null candidate would make the tests degenerate.
  std::vector<const ModelSpec*> candidates;
  for (const ModelSpec& spec : specs) {
    if (!spec.is_null()) candidates.push_back(&spec);
  }
  if (config.mode != RunMode::Fit && candidates.empty()) {
    bundle.warnings.push_back(
        "model set contains only the null model; the selection test is "
        "degenerate (p = 0 by construction)");
  }

  ScoreOptions score_options{model_config.aicc_convention};
  PermOptions perm_options;
  perm_options.add_one_pvalue = model_config.add_one_pvalue;
  perm_options.threads = config.threads;
  perm_options.scoring = score_options;

  const PermutationPlan plan =
      config.exhaustive ? PermutationPlan::exhaustive()
                        : PermutationPlan::sampled(config.permutations, config.seed);

  for (StatKind kind : config.kinds) {
    KindResults results;
    results.kind = kind;
    results.table = build_score_table(specs, dataset, kind, score_options);

    const auto null_spec_it =
        std::find_if(specs.begin(), specs.end(),
                     [](const ModelSpec& m) { return m.is_null(); });
    const auto null_row = std::find_if(
        results.table.begin(), results.table.end(),
        [&](const ScoreTableRow& r) { return r.model_id == null_spec_it->id; });
    if (null_row == results.table.end() || null_row->failed()) {
      throw NumericalError("null model could not be scored");
    }
    results.null_value = null_row->statistic.value;

    if (config.mode != RunMode::Fit) {
      // Only candidates that scored under the original ordering enter the
      // permutation matrix; failed models stay annotated in the table.
      std::vector<PreparedModel> prepared;
      std::vector<std::string> prepared_ids;
      Eigen::VectorXd response;
      for (const ModelSpec* spec : candidates) {
        const auto row = std::find_if(
            results.table.begin(), results.table.end(),
            [&](const ScoreTableRow& r) { return r.model_id == spec->id; });
        if (row == results.table.end() || row->failed()) continue;
        DesignResponse dr = build_design(*spec, dataset);
        if (prepared.empty()) response = std::move(dr.response);
        prepared.push_back(
            PreparedModel{spec->id, std::move(dr.design), spec->k_override});
        prepared_ids.push_back(spec->id);
      }

      if (!prepared.empty()) {
        const PermStatMatrix matrix =
            perm_stat_matrix(std::span<const PreparedModel>(prepared), response,
                             kind, plan, perm_options);

        for (std::size_t i = 0; i < prepared.size(); ++i) {
          const PermTestResult single =
              single_result_from_matrix(matrix, i, perm_options);
          const auto row = std::find_if(results.table.begin(),
                                        results.table.end(),
                                        [&](const ScoreTableRow& r) {
                                          return r.model_id == prepared_ids[i];
                                        });
          row->p_value = single.p_value;
        }

        if (config.mode == RunMode::Select) {
          PermOptions selection_options = perm_options;
          selection_options.keep_per_perm_stats = config.emit_ecdf;
          results.selection =
              selection_result_from_matrix(matrix, selection_options);
        }
        if (config.westfall_young) {
          const std::vector<double> adjusted = westfall_young_from_matrix(matrix);
          for (std::size_t i = 0; i < prepared_ids.size(); ++i) {
            results.wy_adjusted[prepared_ids[i]] = adjusted[i];
          }
        }
      } else if (config.mode == RunMode::Select) {
        // Degenerate: nothing to select among; the observed "minimum" is
        // the null statistic, which no permutation can beat.
        PermTestResult degenerate;
        degenerate.observed_stat = results.null_value;
        degenerate.permutation_count =
            plan.is_exhaustive()
                ? plan.count_for(static_cast<int>(dataset.size()) - 1)
                : config.permutations;
        degenerate.exceed_count = 0;
        degenerate.p_value = 0.0;
        degenerate.seed = config.seed;
        results.selection = degenerate;
      }
    }
    bundle.per_kind.push_back(std::move(results));
  }
  return bundle;
}

ResultsBundle run_selection(const RunConfig& config) {
  const TimeSeriesDataset dataset = ingest_csv(config.dataset_path);
  const ModelSetConfig model_config = parse_model_config(config.model_config_path);
  return run_selection(config, dataset, model_config);
}

std::string score_table_csv(const KindResults& results) {
  std::ostringstream out;
  out << "model,statistic,value,delta_vs_null,p_value,error\n";
  for (const ScoreTableRow& row : results.table) {
    out << csv_quote(row.model_id) << ',' << stat_kind_name(results.kind) << ',';
    if (row.failed()) {
      out << ",,," << csv_quote(row.error);
    } else {
      out << format_double(row.statistic.value) << ','
          << format_double(row.delta_vs_null) << ',';
      if (row.p_value) out << format_double(*row.p_value);
      out << ',';
    }
    out << '\n';
  }
  return out.str();
}

std::string render_score_table_text(const KindResults& results) {
  std::ostringstream out;
  out << "statistic: " << stat_kind_name(results.kind) << "\n";
  out << "model            value   delta_vs_null         p_value\n";
  out << "-----------------------------------------------------\n";
  for (const ScoreTableRow& row : results.table) {
    char line[256];
    if (row.failed()) {
      std::snprintf(line, sizeof(line), "%-12s %9s %15s %15s  [%s]\n",
                    row.model_id.c_str(), "-", "-", "-", row.error.c_str());
    } else {
      std::snprintf(line, sizeof(line), "%-12s %9s %15s %15s\n",
                    row.model_id.c_str(), fixed4(row.statistic.value).c_str(),
                    fixed4(row.delta_vs_null).c_str(),
                    row.p_value ? format_double(*row.p_value).c_str() : "-");
    }
    out << line;
  }
  if (results.selection) {
    const PermTestResult& sel = *results.selection;
    out << "selection test: observed_min=" << fixed4(sel.observed_stat)
        << " exceed=" << sel.exceed_count << "/" << sel.permutation_count
        << " p=" << format_double(sel.p_value);
    if (sel.failed_refit_count > 0) {
      out << " failed_refits=" << sel.failed_refit_count;
    }
    out << "\n";
  }
  return out.str();
}

std::string ecdf_csv(const KindResults& results) {
  if (!results.selection || !results.selection->per_perm_stats) return {};
  std::vector<double> values;
  for (double v : *results.selection->per_perm_stats) {
    if (!std::isnan(v)) values.push_back(v - results.null_value);
  }
  std::sort(values.begin(), values.end());
  std::ostringstream out;
  out << "statistic_delta_vs_null,cumulative_fraction\n";
  const double total = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << format_double(values[i]) << ','
        << format_double(static_cast<double>(i + 1) / total) << '\n';
  }
  return out.str();
}

std::string bundle_to_json(const ResultsBundle& bundle) {
  Json doc;
  Json prov;
  prov["tool_version"] = bundle.tool_version;
  prov["mode"] = mode_name(bundle.mode);
  Json kinds = Json::array();
  for (StatKind kind : bundle.kinds) kinds.push_back(stat_kind_name(kind));
  prov["statistics"] = std::move(kinds);
  prov["seed"] = bundle.seed;
  prov["permutations"] = bundle.permutations;
  prov["exhaustive"] = bundle.exhaustive;
  prov["add_one_pvalue"] = bundle.add_one_pvalue;
  prov["aicc_convention"] =
      bundle.aicc_convention == AiccConvention::Standard ? "standard"
                                                         : "correction-only";
  prov["dataset_file"] = bundle.dataset_file;
  prov["model_config_file"] = bundle.model_config_file;
  prov["dataset_hash"] = bundle.dataset_hash;
  prov["config_hash"] = bundle.config_hash;
  doc["provenance"] = std::move(prov);

  doc["warnings"] = bundle.warnings;

  Json fits = Json::array();
  for (const ModelFitSummary& fit : bundle.fits) {
    Json node;
    node["model"] = fit.model_id;
    if (fit.error.empty()) {
      node["coefficients"] = fit.coefficients;
      node["sigma2"] = fit.sigma2;
      node["loglik"] = fit.loglik;
      node["n_obs"] = fit.n_obs;
      node["k_params"] = fit.k_params;
    } else {
      node["error"] = fit.error;
    }
    fits.push_back(std::move(node));
  }
  doc["fits"] = std::move(fits);

  Json per_kind = Json::array();
  for (const KindResults& results : bundle.per_kind) {
    Json node;
    node["statistic"] = stat_kind_name(results.kind);
    node["null_value"] = results.null_value;
    Json table = Json::array();
    for (const ScoreTableRow& row : results.table) {
      Json r;
      r["model"] = row.model_id;
      if (row.failed()) {
        r["error"] = row.error;
      } else {
        r["value"] = row.statistic.value;
        r["delta_vs_null"] = row.delta_vs_null;
        if (row.p_value) r["p_value"] = *row.p_value;
      }
      table.push_back(std::move(r));
    }
    node["table"] = std::move(table);
    if (results.selection) {
      node["selection_test"] = perm_result_json(*results.selection);
    }
    if (!results.wy_adjusted.empty()) {
      Json wy;
      for (const auto& [id, p] : results.wy_adjusted) wy[id] = p;
      node["westfall_young_adjusted"] = std::move(wy);
    }
    per_kind.push_back(std::move(node));
  }
  doc["results"] = std::move(per_kind);
  return doc.dump(2) + "\n";
}

void write_bundle(const ResultsBundle& bundle, const TimeSeriesDataset& dataset,
                  const ModelSetConfig& model_config,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "bundle.json", bundle_to_json(bundle));
  write_text_file(dir / "dataset_normalized.csv", dataset_to_csv(dataset));
  write_text_file(dir / "config_resolved.json",
                  model_config_to_json(model_config));
  for (const KindResults& results : bundle.per_kind) {
    const std::string kind(stat_kind_name(results.kind));
    write_text_file(dir / ("score_table_" + kind + ".csv"),
                    score_table_csv(results));
    write_text_file(dir / ("score_table_" + kind + ".txt"),
                    render_score_table_text(results));
    const std::string ecdf = ecdf_csv(results);
    if (!ecdf.empty()) {
      write_text_file(dir / ("ecdf_" + kind + ".csv"), ecdf);
    }
  }
}

std::string experiment_grid_csv(std::span<const Experiment1GridRow> rows) {
  std::ostringstream out;
  out << "n_models,naive_reject_rate,selection_reject_rate,band_low,band_high\n";
  for (const Experiment1GridRow& row : rows) {
    out << row.n_models << ',' << format_double(row.result.naive_reject_rate)
        << ',' << format_double(row.result.selection_test_reject_rate) << ','
        << format_double(row.result.binomial_band.first) << ','
        << format_double(row.result.binomial_band.second) << '\n';
  }
  return out.str();
}

std::string experiment_grid_text(std::span<const Experiment1GridRow> rows) {
  std::ostringstream out;
  out << "n_models   naive_rate   selection_rate   95% band\n";
  out << "--------------------------------------------------------\n";
  for (const Experiment1GridRow& row : rows) {
    char line[160];
    std::snprintf(line, sizeof(line), "%8d %12s %16s   (%s, %s)\n",
                  row.n_models, fixed4(row.result.naive_reject_rate).c_str(),
                  fixed4(row.result.selection_test_reject_rate).c_str(),
                  fixed4(row.result.binomial_band.first).c_str(),
                  fixed4(row.result.binomial_band.second).c_str());
    out << line;
  }
  return out.str();
}

void write_experiment_outputs(const Experiment1Config& base,
                              std::span<const Experiment1GridRow> rows,
                              const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "experiment1.csv", experiment_grid_csv(rows));
  write_text_file(dir / "experiment1.txt", experiment_grid_text(rows));

  Json doc;
  Json prov;
  prov["tool_version"] = kVersion;
  prov["mode"] = "experiment1";
  prov["case"] = base.model_case.kind == Experiment1Case::Kind::Independent
                     ? "independent"
                     : "dependent";
  if (base.model_case.kind == Experiment1Case::Kind::Dependent) {
    prov["k"] = base.model_case.k;
  }
  prov["n_outcomes"] = base.n_outcomes;
  prov["repeats"] = base.repeats;
  prov["alpha"] = base.alpha;
  prov["permutations"] = base.permutations;
  prov["seed"] = base.seed;
  doc["provenance"] = std::move(prov);
  Json grid = Json::array();
  for (const Experiment1GridRow& row : rows) {
    Json node;
    node["n_models"] = row.n_models;
    node["naive_reject_rate"] = row.result.naive_reject_rate;
    node["naive_reject_count"] = row.result.naive_reject_count;
    node["selection_reject_rate"] = row.result.selection_test_reject_rate;
    node["selection_reject_count"] = row.result.selection_reject_count;
    node["band_low"] = row.result.binomial_band.first;
    node["band_high"] = row.result.binomial_band.second;
    grid.push_back(std::move(node));
  }
  doc["grid"] = std::move(grid);
  write_text_file(dir / "experiment1.json", doc.dump(2) + "\n");
}

}  // namespace permsel
