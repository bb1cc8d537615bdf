#include "ctxfuse/report.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>

#include "ctxfuse/errors.hpp"

namespace ctxfuse {

namespace {

std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw ParseError("csv: unterminated quoted field");
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace

std::string format_metric(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

std::string format_grid_value(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

std::vector<std::string> experiment_columns(const std::vector<ExperimentRow>& rows) {
  std::vector<std::string> labels{"A", "B", "C", "D"};
  for (const auto& row : rows) {
    for (const auto& label : row.type_labels) {
      if (std::find(labels.begin(), labels.end(), label) == labels.end()) labels.push_back(label);
    }
  }
  std::vector<std::string> columns{"method", "scenario", "accuracy", "f1"};
  columns.insert(columns.end(), labels.begin(), labels.end());
  return columns;
}

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  const auto columns = experiment_columns(rows);
  write_row(out, columns);
  for (const auto& row : rows) {
    std::vector<std::string> fields{row.method, row.scenario, format_metric(row.metrics.accuracy),
                                    format_metric(row.metrics.macro_f1)};
    for (std::size_t c = 4; c < columns.size(); ++c) {
      const auto it = std::find(row.type_labels.begin(), row.type_labels.end(), columns[c]);
      if (it == row.type_labels.end()) {
        fields.emplace_back();
      } else {
        fields.push_back(format_metric(row.metrics.per_class_f1.at(
            static_cast<std::size_t>(it - row.type_labels.begin()))));
      }
    }
    write_row(out, fields);
  }
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  std::vector<std::string> header{table.x_column};
  header.insert(header.end(), table.variant_columns.begin(), table.variant_columns.end());
  write_row(out, header);
  for (std::size_t i = 0; i < table.grid.size(); ++i) {
    std::vector<std::string> fields{format_grid_value(table.grid[i])};
    for (double acc : table.accuracy.at(i)) fields.push_back(format_metric(acc));
    write_row(out, fields);
  }
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("csv: missing header");
  table.header = split_row(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_row(line);
    if (fields.size() != table.header.size()) {
      throw ParseError("csv: row with " + std::to_string(fields.size()) + " fields, header has " +
                       std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  return table;
}

}  // namespace ctxfuse
