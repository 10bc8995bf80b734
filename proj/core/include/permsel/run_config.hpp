#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "permsel/population_model.hpp"
#include "permsel/scoring.hpp"

namespace permsel {

/// Declarative model-set configuration, parsed from a JSON document with
/// an explicit schema version. Unknown keys are errors: a typo must fail
/// loudly instead of silently running a different analysis.
struct ModelSetConfig {
  int schema_version = 1;
  std::vector<ModelSpec> models;
  bool add_one_pvalue = false;
  AiccConvention aicc_convention = AiccConvention::Standard;
  std::optional<double> kde_bandwidth;
};

inline constexpr int kModelConfigSchemaVersion = 1;

ModelSetConfig parse_model_config_text(std::string_view json_text,
                                       std::string_view source_name);

ModelSetConfig parse_model_config(const std::filesystem::path& path);

/// Serializes back to the canonical JSON form (used for provenance and
/// config hashing).
std::string model_config_to_json(const ModelSetConfig& config);

}  // namespace permsel
