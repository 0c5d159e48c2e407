#pragma once

// Minimal CSV: header line plus rows, comma separated, no quoting (every
// field we emit is a number or a bare identifier). Doubles use the shortest
// representation that reads back to the same value.

#include <string>
#include <vector>

#include "cola/eval/metrics.hpp"

namespace cola::eval {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string to_string() const;
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

std::string fmt(double v);
std::string fmt(long v);
std::string fmt(int v);
double parse_double(const std::string& s);

CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::string& path);
// Atomic (temporary file + rename).
void write_csv(const std::string& path, const CsvTable& t);

CsvTable consistency_table_header();
std::vector<std::string> consistency_row(const EvalReport& r);
CsvTable trajectory_csv(const Trajectory& t);
CsvTable field_csv(const FieldGrid& g);

}  // namespace cola::eval
