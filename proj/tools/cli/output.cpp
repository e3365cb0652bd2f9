#include "cli/output.hpp"

#include <cstdio>
#include <ostream>

#include "cli/errors.hpp"

namespace ancova::cli {

OutputFormat parse_output_format(const std::string& name) {
  if (name == "tsv") return OutputFormat::Tsv;
  if (name == "csv") return OutputFormat::Csv;
  if (name == "jsonl") return OutputFormat::JsonLines;
  throw ConfigError("unknown output format '" + name + "' (expected tsv, csv or jsonl)");
}

TableWriter::TableWriter(std::ostream& out, OutputFormat format,
                         std::vector<Column> columns)
    : out_(out), format_(format), columns_(std::move(columns)) {}

void TableWriter::begin() {
  if (format_ == OutputFormat::JsonLines) return;
  const char sep = format_ == OutputFormat::Tsv ? '\t' : ',';
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out_ << sep;
    out_ << columns_[i].name;
  }
  out_ << "\n";
}

void TableWriter::row(const std::vector<std::string>& cells) {
  if (format_ != OutputFormat::JsonLines) {
    const char sep = format_ == OutputFormat::Tsv ? '\t' : ',';
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << sep;
      if (format_ == OutputFormat::Csv &&
          cells[i].find_first_of(",\"") != std::string::npos) {
        out_ << '"';
        for (char ch : cells[i]) {
          if (ch == '"') out_ << '"';
          out_ << ch;
        }
        out_ << '"';
      } else {
        out_ << cells[i];
      }
    }
    out_ << "\n";
    return;
  }
  out_ << "{";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ",";
    out_ << "\"" << columns_[i].name << "\":";
    if (cells[i].empty()) {
      out_ << "null";
    } else if (columns_[i].numeric) {
      out_ << cells[i];
    } else {
      out_ << "\"";
      for (char ch : cells[i]) {
        if (ch == '"' || ch == '\\') out_ << '\\';
        out_ << ch;
      }
      out_ << "\"";
    }
  }
  out_ << "}\n";
}

std::string TableWriter::number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string TableWriter::integer(std::uint64_t value) {
  return std::to_string(value);
}

}  // namespace ancova::cli
