#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ancova::cli {

enum class OutputFormat { Tsv, Csv, JsonLines };

OutputFormat parse_output_format(const std::string& name);

/// Streaming tabular writer with a fixed column schema. Numbers are
/// pre-formatted to six significant digits so all three formats emit
/// byte-identical values for identical results.
class TableWriter {
 public:
  struct Column {
    std::string name;
    bool numeric;
  };

  TableWriter(std::ostream& out, OutputFormat format, std::vector<Column> columns);

  /// Emits the header (tsv/csv only). Call once before any row.
  void begin();
  void row(const std::vector<std::string>& cells);

  static std::string number(double value);
  static std::string integer(std::uint64_t value);

 private:
  std::ostream& out_;
  OutputFormat format_;
  std::vector<Column> columns_;
};

}  // namespace ancova::cli
