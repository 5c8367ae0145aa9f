#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qbattery/cli.hpp"

namespace qbattery::cli {

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw std::out_of_range("no column named '" + std::string(name) + "'");
}

std::vector<double> Table::values(std::string_view name) const {
  const std::size_t c = column(name);
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.push_back(r.at(c));
  return v;
}

void write_table(std::ostream& out, const Table& table, Format format, std::string_view command) {
  if (format == Format::json) {
    nlohmann::ordered_json doc;
    doc["command"] = command;
    doc["columns"] = table.columns;
    auto rows = nlohmann::json::array();
    for (const auto& r : table.rows) {
      auto row = nlohmann::json::array();
      for (double v : r) row.push_back(std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr));
      rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(1) << '\n';
    return;
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  std::ostringstream cell;
  cell.imbue(std::locale::classic());
  cell << std::setprecision(17);
  for (const auto& r : table.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out << ',';
      if (std::isnan(r[i])) {
        out << "nan";
      } else {
        cell.str({});
        cell << r[i];
        out << cell.str();
      }
    }
    out << '\n';
  }
}

Table read_csv(std::istream& in) {
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("read_csv: empty input");
  {
    std::istringstream header(line);
    std::string name;
    while (std::getline(header, name, ',')) t.columns.push_back(name);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string f;
    while (std::getline(fields, f, ',')) {
      if (f == "nan" || f.empty()) {
        row.push_back(std::nan(""));
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);  // unlike stod, keeps subnormals
      if (end == f.c_str() || *end != '\0') throw std::invalid_argument("read_csv: bad number '" + f + "'");
      row.push_back(v);
    }
    if (line.back() == ',') row.push_back(std::nan(""));
    if (row.size() != t.columns.size()) throw std::invalid_argument("read_csv: ragged row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace qbattery::cli
