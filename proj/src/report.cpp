#include "hypwave/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hypwave/errors.hpp"
#include "json.hpp"

namespace hypwave {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string table_to_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) os << ',';
    os << t.columns[c];
  }
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      os << format_double(row[c]);
    }
    os << '\n';
  }
  return os.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Table table_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  Table t;
  if (!std::getline(is, line) || line.empty())
    throw io_error("csv: missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  t.columns = split_csv_line(line);
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != t.columns.size())
      throw io_error("csv: line " + std::to_string(lineno) + " has " +
                     std::to_string(cells.size()) + " cells, expected " +
                     std::to_string(t.columns.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(c, &used);
      } catch (const std::exception&) {
        throw io_error("csv: non-numeric cell '" + c + "' on line " +
                       std::to_string(lineno));
      }
      if (used != c.size())
        throw io_error("csv: trailing junk in cell '" + c + "' on line " +
                       std::to_string(lineno));
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string report_to_json(const Report& r) {
  json j;
  j["version"] = r.version;
  j["subcommand"] = r.subcommand;
  j["config"] = r.config;
  j["wall_time_s"] = r.wall_time_s;
  j["scalars"] = r.scalars;
  json tabs = json::object();
  for (const auto& [name, t] : r.tables) {
    json jt;
    jt["columns"] = t.columns;
    jt["rows"] = t.rows;
    tabs[name] = std::move(jt);
  }
  j["tables"] = std::move(tabs);
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw io_error(std::string("report: invalid JSON: ") + e.what());
  }
  try {
    Report r;
    r.version = j.at("version").get<std::string>();
    r.subcommand = j.at("subcommand").get<std::string>();
    r.config = j.at("config").get<std::map<std::string, std::string>>();
    r.wall_time_s = j.at("wall_time_s").get<double>();
    r.scalars = j.at("scalars").get<std::map<std::string, double>>();
    for (const auto& [name, jt] : j.at("tables").items()) {
      Table t;
      t.columns = jt.at("columns").get<std::vector<std::string>>();
      t.rows = jt.at("rows").get<std::vector<std::vector<double>>>();
      for (const auto& row : t.rows)
        if (row.size() != t.columns.size())
          throw io_error("report: table '" + name + "' has a ragged row");
      r.tables[name] = std::move(t);
    }
    return r;
  } catch (const json::exception& e) {
    throw io_error(std::string("report: unexpected JSON shape: ") + e.what());
  }
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec)
      throw io_error("cannot create directory '" +
                     target.parent_path().string() + "': " + ec.message());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    os << text;
    os.flush();
    if (!os.good()) {
      os.close();
      fs::remove(tmp, ec);
      throw io_error("cannot write '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ec2;
    fs::remove(tmp, ec2);
    throw io_error("cannot rename '" + tmp.string() + "' to '" +
                   target.string() + "': " + ec.message());
  }
}

std::string read_text(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is.good()) throw io_error("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << is.rdbuf();
  if (is.bad()) throw io_error("error while reading '" + path + "'");
  return os.str();
}

std::string write_report(const Report& r, const std::string& dir,
                         const std::string& name) {
  for (const auto& [k, v] : r.scalars)
    if (!std::isfinite(v))
      throw validation_error("report: scalar '" + k + "' is not finite");
  for (const auto& [tn, t] : r.tables) {
    for (const auto& row : t.rows) {
      if (row.size() != t.columns.size())
        throw validation_error("report: table '" + tn + "' has a ragged row");
      for (double v : row)
        if (!std::isfinite(v))
          throw validation_error("report: table '" + tn +
                                 "' contains a non-finite cell");
    }
  }
  const fs::path base(dir);
  const std::string json_path = (base / (name + ".json")).string();
  write_text_atomic(json_path, report_to_json(r));
  for (const auto& [tn, t] : r.tables)
    write_text_atomic((base / (name + "__" + tn + ".csv")).string(),
                      table_to_csv(t));
  return json_path;
}

Report read_report(const std::string& json_path) {
  return report_from_json(read_text(json_path));
}

namespace {

bool close(double a, double b, double abs_tol, double rel_tol) {
  return std::abs(a - b) <= abs_tol + rel_tol * std::abs(b);
}

}  // namespace

GoldenDiff golden_check(const Report& got, const Report& golden,
                        double abs_tol, double rel_tol) {
  // Schema first: the comparison is meaningless across different shapes.
  std::string schema;
  for (const auto& [k, v] : golden.scalars)
    if (!got.scalars.count(k)) schema += " missing scalar '" + k + "';";
  for (const auto& [k, v] : got.scalars)
    if (!golden.scalars.count(k)) schema += " extra scalar '" + k + "';";
  for (const auto& [tn, t] : golden.tables) {
    auto it = got.tables.find(tn);
    if (it == got.tables.end()) {
      schema += " missing table '" + tn + "';";
      continue;
    }
    if (it->second.columns != t.columns)
      schema += " table '" + tn + "' column mismatch;";
    else if (it->second.rows.size() != t.rows.size())
      schema += " table '" + tn + "' has " +
                std::to_string(it->second.rows.size()) + " rows, golden has " +
                std::to_string(t.rows.size()) + ";";
  }
  for (const auto& [tn, t] : got.tables)
    if (!golden.tables.count(tn)) schema += " extra table '" + tn + "';";
  if (!schema.empty()) throw validation_error("golden_check: schema:" + schema);

  GoldenDiff d;
  std::ostringstream msg;
  int mismatches = 0;
  auto note = [&](const std::string& what, double a, double b) {
    ++mismatches;
    if (mismatches <= 20)
      msg << "  " << what << ": got " << format_double(a) << ", golden "
          << format_double(b) << ", diff " << format_double(a - b) << "\n";
  };
  for (const auto& [k, v] : golden.scalars)
    if (!close(got.scalars.at(k), v, abs_tol, rel_tol))
      note("scalar '" + k + "'", got.scalars.at(k), v);
  for (const auto& [tn, t] : golden.tables) {
    const Table& o = got.tables.at(tn);
    for (std::size_t i = 0; i < t.rows.size(); ++i)
      for (std::size_t c = 0; c < t.columns.size(); ++c)
        if (!close(o.rows[i][c], t.rows[i][c], abs_tol, rel_tol))
          note("table '" + tn + "' row " + std::to_string(i) + " col '" +
                   t.columns[c] + "'",
               o.rows[i][c], t.rows[i][c]);
  }
  if (mismatches > 20)
    msg << "  ... and " << (mismatches - 20) << " further mismatches\n";
  d.pass = mismatches == 0;
  d.message = d.pass ? "PASS" : "FAIL\n" + msg.str();
  return d;
}

}  // namespace hypwave
