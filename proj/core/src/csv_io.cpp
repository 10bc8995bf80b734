#include "permsel/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "permsel/errors.hpp"
#include "permsel/population_model.hpp"

namespace permsel {

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      return fields;
    }
    fields.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

[[noreturn]] void fail(std::string_view source, std::size_t line,
                       const std::string& what) {
  std::ostringstream msg;
  msg << source << ":" << line << ": " << what;
  throw ParseError(msg.str());
}

int parse_int(const std::string& field, std::string_view source,
              std::size_t line, const std::string& column) {
  int value = 0;
  const auto res =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    fail(source, line, "column '" + column + "': cannot parse integer '" +
                           field + "'");
  }
  return value;
}

double parse_real(const std::string& field, std::string_view source,
                  std::size_t line, const std::string& column) {
  double value = 0.0;
  const auto res =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size() ||
      !std::isfinite(value)) {
    fail(source, line, "column '" + column + "': cannot parse number '" +
                           field + "'");
  }
  return value;
}

}  // namespace

TimeSeriesDataset parse_dataset_csv(std::string_view text,
                                    std::string_view source_name) {
  std::vector<std::string> lines;
  {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t nl = text.find('\n', start);
      if (nl == std::string_view::npos) nl = text.size();
      std::string_view line = text.substr(start, nl - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines.emplace_back(line);
      start = nl + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
  }
  if (lines.empty()) fail(source_name, 1, "empty file");

  const std::vector<std::string> header = split_fields(lines[0]);
  std::size_t year_col = header.size();
  std::size_t count_col = header.size();
  std::vector<std::pair<std::string, std::size_t>> covariate_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    if (name == "year") {
      if (year_col != header.size()) fail(source_name, 1, "duplicate column 'year'");
      year_col = c;
    } else if (name == "count") {
      if (count_col != header.size()) fail(source_name, 1, "duplicate column 'count'");
      count_col = c;
    } else {
      if (name.empty()) fail(source_name, 1, "empty covariate column name");
      if (name == kDensityName) {
        fail(source_name, 1,
             "'density' is reserved for the lagged-count term and cannot "
             "name a covariate");
      }
      for (const auto& [existing, _] : covariate_cols) {
        if (existing == name) {
          fail(source_name, 1, "duplicate column '" + name + "'");
        }
      }
      covariate_cols.emplace_back(name, c);
    }
  }
  if (year_col == header.size()) {
    fail(source_name, 1, "missing mandatory column 'year'");
  }
  if (count_col == header.size()) {
    fail(source_name, 1, "missing mandatory column 'count'");
  }

  TimeSeriesDataset dataset;
  for (const auto& [name, _] : covariate_cols) dataset.covariates[name] = {};

  for (std::size_t row = 1; row < lines.size(); ++row) {
    const std::size_t line_no = row + 1;
    if (lines[row].empty()) {
      fail(source_name, line_no, "blank line inside the data block");
    }
    const std::vector<std::string> fields = split_fields(lines[row]);
    if (fields.size() != header.size()) {
      std::ostringstream msg;
      msg << "expected " << header.size() << " fields, got " << fields.size();
      fail(source_name, line_no, msg.str());
    }
    const int year = parse_int(fields[year_col], source_name, line_no, "year");
    if (!dataset.years.empty() && year != dataset.years.back() + 1) {
      std::ostringstream msg;
      msg << source_name << ":" << line_no << ": year " << year << " follows "
          << dataset.years.back() << "; years must be consecutive";
      throw GapError(msg.str());
    }
    dataset.years.push_back(year);

    const double count = parse_real(fields[count_col], source_name, line_no, "count");
    if (!(count > 0.0)) {
      std::ostringstream msg;
      msg << source_name << ":" << line_no << ": count " << count
          << " is not positive";
      throw NonPositiveCount(msg.str());
    }
    dataset.counts.push_back(count);

    for (const auto& [name, col] : covariate_cols) {
      dataset.covariates[name].push_back(
          parse_real(fields[col], source_name, line_no, name));
    }
  }
  if (dataset.years.empty()) fail(source_name, 2, "no data rows");

  dataset.validate();
  return dataset;
}

TimeSeriesDataset ingest_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open dataset file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset_csv(buf.str(), path.string());
}

std::string dataset_to_csv(const TimeSeriesDataset& dataset) {
  std::ostringstream out;
  out << "year,count";
  for (const auto& [name, _] : dataset.covariates) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < dataset.years.size(); ++i) {
    out << dataset.years[i] << ',' << format_double(dataset.counts[i]);
    for (const auto& [_, series] : dataset.covariates) {
      out << ',' << format_double(series[i]);
    }
    out << '\n';
  }
  return out.str();
}

void write_dataset_csv(const TimeSeriesDataset& dataset,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write dataset file: " + path.string());
  out << dataset_to_csv(dataset);
}

}  // namespace permsel
