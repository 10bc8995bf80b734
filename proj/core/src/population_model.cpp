#include "permsel/population_model.hpp"

#include <cmath>
#include <sstream>

#include "permsel/errors.hpp"

namespace permsel {

namespace {

void check_counts_positive(const TimeSeriesDataset& dataset) {
  for (std::size_t i = 0; i < dataset.counts.size(); ++i) {
    if (!(dataset.counts[i] > 0.0) || !std::isfinite(dataset.counts[i])) {
      std::ostringstream msg;
      msg << "count at index " << i << " is " << dataset.counts[i]
          << "; counts must be positive";
      throw NonPositiveCount(msg.str());
    }
  }
}

}  // namespace

void TimeSeriesDataset::validate() const {
  if (counts.size() != years.size()) {
    throw AlignmentError("counts and years differ in length");
  }
  for (std::size_t i = 1; i < years.size(); ++i) {
    if (years[i] != years[i - 1] + 1) {
      std::ostringstream msg;
      msg << "years must be consecutive: " << years[i] << " follows "
          << years[i - 1];
      throw GapError(msg.str());
    }
  }
  check_counts_positive(*this);
  for (const auto& [name, series] : covariates) {
    if (series.size() != years.size()) {
      std::ostringstream msg;
      msg << "covariate '" << name << "' has " << series.size()
          << " values for " << years.size() << " years";
      throw AlignmentError(msg.str());
    }
    for (double v : series) {
      if (!std::isfinite(v)) {
        throw AlignmentError("covariate '" + name +
                             "' contains non-finite values");
      }
    }
  }
}

const char* family_name(ModelFamily family) noexcept {
  switch (family) {
    case ModelFamily::Ricker: return "ricker";
    case ModelFamily::Gompertz: return "gompertz";
    case ModelFamily::Null: return "null";
  }
  return "?";
}

void ModelSpec::validate() const {
  if (id.empty()) throw ConfigError("model spec needs a non-empty id");
  if (family == ModelFamily::Null) {
    if (!covariate_names.empty() || !interactions.empty() || include_density) {
      throw ConfigError("model '" + id +
                        "': the null family is intercept-only; it cannot "
                        "carry covariates, interactions or a density term");
    }
  }
  if (k_override && *k_override < 1) {
    throw ConfigError("model '" + id + "': k_override must be >= 1");
  }
}

ModelSpec null_model_spec(std::string id) {
  ModelSpec spec;
  spec.id = std::move(id);
  spec.family = ModelFamily::Null;
  return spec;
}

std::vector<double> relative_change(const TimeSeriesDataset& dataset) {
  if (dataset.counts.size() < 2) {
    throw TooFewRows("relative change needs at least two counts");
  }
  check_counts_positive(dataset);
  std::vector<double> r(dataset.counts.size() - 1);
  for (std::size_t i = 0; i + 1 < dataset.counts.size(); ++i) {
    r[i] = std::log(dataset.counts[i + 1] / dataset.counts[i]);
  }
  return r;
}

namespace {

// Series value at transition row i (= year index i) for a covariate name
// or the density term.
class SeriesResolver {
 public:
  SeriesResolver(const ModelSpec& spec, const TimeSeriesDataset& dataset)
      : spec_(spec), dataset_(dataset) {}

  double value(const std::string& name, std::size_t row) const {
    if (name == kDensityName) {
      if (spec_.family == ModelFamily::Null) {
        throw ConfigError("model '" + spec_.id +
                          "': the null family has no density term");
      }
      const double count = dataset_.counts[row];
      return spec_.family == ModelFamily::Gompertz ? std::log(count) : count;
    }
    const auto it = dataset_.covariates.find(name);
    if (it == dataset_.covariates.end()) {
      throw UnknownCovariate("model '" + spec_.id + "': unknown covariate '" +
                             name + "'");
    }
    if (it->second.size() != dataset_.size()) {
      std::ostringstream msg;
      msg << "covariate '" << name << "' has " << it->second.size()
          << " values for " << dataset_.size() << " years";
      throw AlignmentError(msg.str());
    }
    return it->second[row];
  }

 private:
  const ModelSpec& spec_;
  const TimeSeriesDataset& dataset_;
};

}  // namespace

DesignResponse build_design(const ModelSpec& spec,
                            const TimeSeriesDataset& dataset) {
  spec.validate();
  const std::vector<double> r = relative_change(dataset);
  const auto n_rows = static_cast<Eigen::Index>(r.size());

  const SeriesResolver resolve(spec, dataset);
  const Eigen::Index n_cols = 1 + (spec.include_density ? 1 : 0) +
                              static_cast<Eigen::Index>(spec.covariate_names.size()) +
                              static_cast<Eigen::Index>(spec.interactions.size());

  Eigen::MatrixXd x(n_rows, n_cols);
  Eigen::VectorXd response(n_rows);
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    const auto row = static_cast<std::size_t>(i);
    Eigen::Index col = 0;
    x(i, col++) = 1.0;
    if (spec.include_density) x(i, col++) = resolve.value(kDensityName, row);
    for (const auto& name : spec.covariate_names) {
      x(i, col++) = resolve.value(name, row);
    }
    for (const auto& [a, b] : spec.interactions) {
      x(i, col++) = resolve.value(a, row) * resolve.value(b, row);
    }
    response(i) = r[row];
  }
  return DesignResponse{DesignMatrix(std::move(x)), std::move(response)};
}

}  // namespace permsel
