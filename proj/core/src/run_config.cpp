#include "permsel/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "permsel/errors.hpp"

namespace permsel {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(std::string_view source, const std::string& what) {
  std::ostringstream msg;
  msg << source << ": " << what;
  throw ConfigError(msg.str());
}

void reject_unknown_keys(const Json& object, std::string_view source,
                         const std::string& context,
                         const std::set<std::string>& allowed) {
  for (const auto& [key, _] : object.items()) {
    if (!allowed.contains(key)) {
      fail(source, context + ": unknown key '" + key + "'");
    }
  }
}

ModelFamily parse_family(const Json& value, std::string_view source,
                         const std::string& context) {
  if (!value.is_string()) fail(source, context + ": 'family' must be a string");
  const std::string name = value.get<std::string>();
  if (name == "ricker") return ModelFamily::Ricker;
  if (name == "gompertz") return ModelFamily::Gompertz;
  if (name == "null") return ModelFamily::Null;
  fail(source, context + ": unknown family '" + name +
                   "' (expected ricker, gompertz or null)");
}

ModelSpec parse_model(const Json& node, std::string_view source,
                      std::size_t index) {
  std::ostringstream ctx;
  ctx << "models[" << index << "]";
  const std::string context = ctx.str();
  if (!node.is_object()) fail(source, context + ": must be an object");
  reject_unknown_keys(node, source, context,
                      {"id", "family", "include_density", "covariates",
                       "interactions", "k_override"});
  if (!node.contains("id") || !node["id"].is_string()) {
    fail(source, context + ": needs a string 'id'");
  }
  if (!node.contains("family")) fail(source, context + ": needs 'family'");

  ModelSpec spec;
  spec.id = node["id"].get<std::string>();
  spec.family = parse_family(node["family"], source, context);
  if (node.contains("include_density")) {
    if (!node["include_density"].is_boolean()) {
      fail(source, context + ": 'include_density' must be a boolean");
    }
    spec.include_density = node["include_density"].get<bool>();
  }
  if (node.contains("covariates")) {
    if (!node["covariates"].is_array()) {
      fail(source, context + ": 'covariates' must be an array of names");
    }
    for (const auto& name : node["covariates"]) {
      if (!name.is_string()) {
        fail(source, context + ": covariate names must be strings");
      }
      spec.covariate_names.push_back(name.get<std::string>());
    }
  }
  if (node.contains("interactions")) {
    if (!node["interactions"].is_array()) {
      fail(source, context + ": 'interactions' must be an array of pairs");
    }
    for (const auto& pair : node["interactions"]) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
          !pair[1].is_string()) {
        fail(source,
             context + ": each interaction must be a pair of series names");
      }
      spec.interactions.emplace_back(pair[0].get<std::string>(),
                                     pair[1].get<std::string>());
    }
  }
  if (node.contains("k_override")) {
    if (!node["k_override"].is_number_integer()) {
      fail(source, context + ": 'k_override' must be an integer");
    }
    spec.k_override = node["k_override"].get<int>();
  }
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    fail(source, std::string(e.what()));
  }
  return spec;
}

}  // namespace

ModelSetConfig parse_model_config_text(std::string_view json_text,
                                       std::string_view source_name) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(source_name, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(source_name, "top level must be an object");
  reject_unknown_keys(doc, source_name, "top level",
                      {"schema_version", "options", "models"});

  if (!doc.contains("schema_version") ||
      !doc["schema_version"].is_number_integer()) {
    fail(source_name, "needs an integer 'schema_version'");
  }
  ModelSetConfig config;
  config.schema_version = doc["schema_version"].get<int>();
  if (config.schema_version != kModelConfigSchemaVersion) {
    std::ostringstream msg;
    msg << "unsupported schema_version " << config.schema_version
        << " (this build understands " << kModelConfigSchemaVersion << ")";
    fail(source_name, msg.str());
  }

  if (doc.contains("options")) {
    const Json& opts = doc["options"];
    if (!opts.is_object()) fail(source_name, "'options' must be an object");
    reject_unknown_keys(opts, source_name, "options",
                        {"add_one_pvalue", "aicc_convention", "kde_bandwidth"});
    if (opts.contains("add_one_pvalue")) {
      if (!opts["add_one_pvalue"].is_boolean()) {
        fail(source_name, "options.add_one_pvalue must be a boolean");
      }
      config.add_one_pvalue = opts["add_one_pvalue"].get<bool>();
    }
    if (opts.contains("aicc_convention")) {
      const std::string name = opts["aicc_convention"].is_string()
                                   ? opts["aicc_convention"].get<std::string>()
                                   : std::string();
      if (name == "standard") {
        config.aicc_convention = AiccConvention::Standard;
      } else if (name == "correction-only") {
        config.aicc_convention = AiccConvention::CorrectionOnly;
      } else {
        fail(source_name,
             "options.aicc_convention must be 'standard' or 'correction-only'");
      }
    }
    if (opts.contains("kde_bandwidth")) {
      if (!opts["kde_bandwidth"].is_number()) {
        fail(source_name, "options.kde_bandwidth must be a number");
      }
      const double h = opts["kde_bandwidth"].get<double>();
      if (!(h > 0.0)) fail(source_name, "options.kde_bandwidth must be > 0");
      config.kde_bandwidth = h;
    }
  }

  if (!doc.contains("models") || !doc["models"].is_array() ||
      doc["models"].empty()) {
    fail(source_name, "needs a non-empty 'models' array");
  }
  std::set<std::string> seen_ids;
  for (std::size_t i = 0; i < doc["models"].size(); ++i) {
    ModelSpec spec = parse_model(doc["models"][i], source_name, i);
    if (!seen_ids.insert(spec.id).second) {
      fail(source_name, "duplicate model id '" + spec.id + "'");
    }
    config.models.push_back(std::move(spec));
  }
  return config;
}

ModelSetConfig parse_model_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open model config: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_config_text(buf.str(), path.string());
}

std::string model_config_to_json(const ModelSetConfig& config) {
  Json doc;
  doc["schema_version"] = config.schema_version;
  Json opts;
  opts["add_one_pvalue"] = config.add_one_pvalue;
  opts["aicc_convention"] =
      config.aicc_convention == AiccConvention::Standard ? "standard"
                                                         : "correction-only";
  if (config.kde_bandwidth) opts["kde_bandwidth"] = *config.kde_bandwidth;
  doc["options"] = std::move(opts);
  doc["models"] = Json::array();
  for (const ModelSpec& spec : config.models) {
    Json node;
    node["id"] = spec.id;
    node["family"] = family_name(spec.family);
    node["include_density"] = spec.include_density;
    node["covariates"] = spec.covariate_names;
    Json inter = Json::array();
    for (const auto& [a, b] : spec.interactions) {
      inter.push_back(Json::array({a, b}));
    }
    node["interactions"] = std::move(inter);
    if (spec.k_override) node["k_override"] = *spec.k_override;
    doc["models"].push_back(std::move(node));
  }
  return doc.dump(2) + "\n";
}

}  // namespace permsel
