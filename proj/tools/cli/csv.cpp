#include "cli/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ancova::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parse_number(const std::string& text, std::size_t line_no,
                    std::size_t col_no, const std::string& column) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw NonNumericValue("non-numeric value '" + text + "' in column '" +
                          column + "' at row " + std::to_string(line_no) +
                          ", column " + std::to_string(col_no));
  }
  return value;
}

}  // namespace

LoadedDataset ingest_csv_stream(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(origin + ": empty file, expected a header row");
  const std::vector<std::string> header = split_fields(line);

  std::size_t group_col = header.size();
  std::size_t y_col = header.size();
  std::vector<std::size_t> covariate_cols;
  std::vector<std::string> covariate_names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == "group") {
      group_col = j;
    } else if (header[j] == "y") {
      y_col = j;
    } else {
      covariate_cols.push_back(j);
      covariate_names.push_back(header[j]);
    }
  }
  if (group_col == header.size())
    throw MissingColumn(origin + ": required column 'group' is missing");
  if (y_col == header.size())
    throw MissingColumn(origin + ": required column 'y' is missing");

  std::vector<std::string> group_names;
  std::vector<int> labels;
  std::vector<double> ys;
  std::vector<double> covs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError(origin + ": line " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(header.size()));
    }
    const std::string& label = fields[group_col];
    if (label.empty())
      throw ParseError(origin + ": empty group label at line " +
                       std::to_string(line_no));
    int group_id = 0;
    for (std::size_t g = 0; g < group_names.size(); ++g) {
      if (group_names[g] == label) {
        group_id = static_cast<int>(g + 1);
        break;
      }
    }
    if (group_id == 0) {
      group_names.push_back(label);
      group_id = static_cast<int>(group_names.size());
    }
    labels.push_back(group_id);
    ys.push_back(parse_number(fields[y_col], line_no, y_col + 1, "y"));
    for (std::size_t k = 0; k < covariate_cols.size(); ++k) {
      covs.push_back(parse_number(fields[covariate_cols[k]], line_no,
                                  covariate_cols[k] + 1, covariate_names[k]));
    }
  }
  if (ys.empty()) throw ParseError(origin + ": no data rows");

  Matrix z(ys.size(), covariate_cols.size(), std::move(covs));
  return LoadedDataset{Dataset(Vector(std::move(ys)), std::move(labels), std::move(z)),
                       std::move(group_names), std::move(covariate_names)};
}

LoadedDataset ingest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file '" + path + "'");
  return ingest_csv_stream(in, path);
}

void write_csv(const LoadedDataset& loaded, std::ostream& out) {
  out << "group,y";
  for (const auto& name : loaded.covariate_names) out << "," << name;
  out << "\n";
  char buf[40];
  const Dataset& data = loaded.data;
  for (std::size_t i = 0; i < data.n_total(); ++i) {
    out << loaded.group_names[static_cast<std::size_t>(data.group_of()[i] - 1)];
    std::snprintf(buf, sizeof buf, "%.17g", data.response()[i]);
    out << "," << buf;
    for (std::size_t k = 0; k < data.n_covariates(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", data.covariates()(i, k));
      out << "," << buf;
    }
    out << "\n";
  }
}

}  // namespace ancova::cli
