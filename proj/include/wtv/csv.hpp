#pragma once

#include <string>
#include <vector>

#include "wtv/types.hpp"

namespace wtv {

class CsvError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct CsvTable {
  std::vector<std::string> headers;
  std::vector<std::vector<double>> columns; // one vector per header

  std::size_t rows() const {
    return columns.empty() ? 0 : columns.front().size();
  }
  const std::vector<double>& column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

/// Comma-separated, header row required, '.' decimal, UTF-8.
CsvTable read_csv(const std::string& path);

/// Locale-independent output, shortest round-trippable doubles.
void write_csv(const std::string& path, const CsvTable& table);

std::string format_double(double v);

} // namespace wtv
