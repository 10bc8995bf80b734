#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace permsel {

/// Annual population counts plus named covariate series, all aligned to
/// the same consecutive run of years.
struct TimeSeriesDataset {
  std::vector<int> years;            ///< strictly increasing, consecutive
  std::vector<double> counts;        ///< animals; must stay positive
  std::map<std::string, std::vector<double>> covariates;

  std::size_t size() const noexcept { return years.size(); }

  /// Throws GapError, NonPositiveCount or AlignmentError when an
  /// invariant is broken.
  void validate() const;
};

}  // namespace permsel
