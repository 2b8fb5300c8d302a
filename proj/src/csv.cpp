#include "wtv/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wtv {

const std::vector<double>& CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < headers.size(); ++i)
    if (headers[i] == name) return columns[i];
  throw CsvError("missing column: " + name);
}

bool CsvTable::has_column(const std::string& name) const {
  for (const auto& h : headers)
    if (h == name) return true;
  return false;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

} // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw CsvError(path + ": empty file");
  t.headers = split_line(line);
  t.columns.assign(t.headers.size(), {});
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != t.headers.size())
      throw CsvError(path + ":" + std::to_string(lineno) +
                     ": expected " + std::to_string(t.headers.size()) +
                     " fields, got " + std::to_string(cells.size()));
    for (std::size_t i = 0; i < cells.size(); ++i) {
      double v;
      auto [p, ec] = std::from_chars(cells[i].data(),
                                     cells[i].data() + cells[i].size(), v);
      if (ec != std::errc{} || p != cells[i].data() + cells[i].size())
        throw CsvError(path + ":" + std::to_string(lineno) +
                       ": bad number '" + cells[i] + "'");
      t.columns[i].push_back(v);
    }
  }
  return t;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // trim to shortest representation that round-trips
  for (int prec = 1; prec < 17; ++prec) {
    char s[32];
    std::snprintf(s, sizeof s, "%.*g", prec, v);
    double back;
    std::sscanf(s, "%lf", &back);
    if (back == v) return s;
  }
  return buf;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw CsvError("cannot write " + path);
  for (std::size_t i = 0; i < table.headers.size(); ++i)
    out << (i ? "," : "") << table.headers[i];
  out << "\n";
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t i = 0; i < table.columns.size(); ++i)
      out << (i ? "," : "") << format_double(table.columns[i][r]);
    out << "\n";
  }
}

} // namespace wtv
