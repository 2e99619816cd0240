// Run reports: named scalars plus named tables, serialized as JSON (scalars
// and tables together) and as one CSV file per table.  All numbers are
// written with 17 significant digits so doubles round-trip losslessly, and
// every file is written atomically (temp file + rename) so an interrupted
// run never leaves a partial report at the target path.
#pragma once

#include <map>
#include <string>
#include <vector>

namespace hypwave {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // each row has columns.size() cells
};

struct Report {
  std::string version = "hypwave 0.1.0";
  std::string subcommand;
  std::map<std::string, std::string> config;  // echo of the effective options
  double wall_time_s = 0.0;  // informational; excluded from comparisons
  std::map<std::string, double> scalars;
  std::map<std::string, Table> tables;
};

// Shortest text that parses back to exactly the same double (%.17g).
std::string format_double(double v);

std::string table_to_csv(const Table& t);
// Throws io_error on ragged rows, non-numeric cells, or an empty header.
Table table_from_csv(const std::string& text);

std::string report_to_json(const Report& r);
// Throws io_error when the text is not a JSON report of the expected shape.
Report report_from_json(const std::string& text);

// Writes text to path via a temp file in the same directory plus rename.
// Creates missing parent directories.  Throws io_error on any failure.
void write_text_atomic(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);  // throws io_error

// Emits dir/<name>.json and dir/<name>__<table>.csv; returns the JSON path.
// All scalars and table cells must be finite (validation_error otherwise;
// JSON has no lossless encoding for non-finite values).
std::string write_report(const Report& r, const std::string& dir,
                         const std::string& name);
Report read_report(const std::string& json_path);

struct GoldenDiff {
  bool pass = true;
  std::string message;  // human-readable list of mismatches when !pass
};

// Compares scalars and table cells with |got - golden| <= abs_tol +
// rel_tol * |golden|.  Version, config echo, and wall time are excluded.
// Throws validation_error when the schemas differ (scalar key sets, table
// names, column lists, or row counts).
GoldenDiff golden_check(const Report& got, const Report& golden,
                        double abs_tol, double rel_tol);

}  // namespace hypwave
