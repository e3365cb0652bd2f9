#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ancova/model.hpp"
#include "cli/errors.hpp"

namespace ancova::cli {

/// Dataset plus the labels needed to write it back out.
struct LoadedDataset {
  Dataset data;
  std::vector<std::string> group_names;      // index = group id - 1
  std::vector<std::string> covariate_names;  // header order
};

/// Reads a comma-separated file with a header row. The `group` column holds
/// arbitrary labels (mapped to 1..a by first appearance), `y` the response;
/// every further column is a numeric covariate.
LoadedDataset ingest_csv(const std::string& path);
LoadedDataset ingest_csv_stream(std::istream& in, const std::string& origin);

/// Re-emits a dataset in the same column layout.
void write_csv(const LoadedDataset& loaded, std::ostream& out);

}  // namespace ancova::cli
