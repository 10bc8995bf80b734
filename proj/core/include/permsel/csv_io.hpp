#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "permsel/dataset.hpp"

namespace permsel {

/// Shortest round-trip decimal rendering of a double.
std::string format_double(double value);

/// Parses a dataset from CSV text. The header must contain `year` and
/// `count`; every other column is a covariate series. Errors carry
/// `source:line` context.
TimeSeriesDataset parse_dataset_csv(std::string_view text,
                                    std::string_view source_name);

/// Reads and validates a dataset CSV file.
TimeSeriesDataset ingest_csv(const std::filesystem::path& path);

/// Normalized form: year,count first, covariates in name order, values in
/// shortest round-trip notation. Ingesting the output reproduces the
/// dataset exactly.
std::string dataset_to_csv(const TimeSeriesDataset& dataset);

void write_dataset_csv(const TimeSeriesDataset& dataset,
                       const std::filesystem::path& path);

}  // namespace permsel
