#include "cola/eval/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cola/learn/checkpoint.hpp"

namespace cola::eval {

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) throw UsageError("csv: row width does not match header");
  rows.push_back(std::move(row));
}

std::string CsvTable::to_string() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw FormatError("csv: no column '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  return parse_double(rows.at(row).at(column(name)));
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}
std::string fmt(long v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw FormatError("csv: bad number '" + s + "'");
  return v;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != t.header.size()) throw FormatError("csv: ragged row");
      t.rows.push_back(std::move(cells));
    }
  }
  if (first) throw FormatError("csv: missing header");
  return t;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

void write_csv(const std::string& path, const CsvTable& t) {
  learn::write_file_atomic(path, t.to_string());
}

CsvTable consistency_table_header() {
  return {{"game", "alpha", "field", "n_samples", "mean_sq_loss", "std", "n_diverged"}, {}};
}

std::vector<std::string> consistency_row(const EvalReport& r) {
  return {r.game, fmt(r.alpha), r.field, fmt(r.n_samples), fmt(r.mean_sq), fmt(r.std_sq),
          fmt(r.n_diverged)};
}

CsvTable trajectory_csv(const Trajectory& t) {
  CsvTable c;
  c.header.push_back("step");
  const std::size_t dim = t.points.empty() ? 0 : t.points.front().theta.size();
  for (std::size_t i = 0; i < dim; ++i) c.header.push_back("theta" + std::to_string(i));
  c.header.push_back("loss1");
  c.header.push_back("loss2");
  for (const auto& p : t.points) {
    std::vector<std::string> row{fmt(p.step)};
    for (double v : p.theta) row.push_back(fmt(v));
    row.push_back(fmt(p.loss1));
    row.push_back(fmt(p.loss2));
    c.add_row(std::move(row));
  }
  return c;
}

CsvTable field_csv(const FieldGrid& g) {
  CsvTable c{{"x", "y", "dx", "dy"}, {}};
  for (std::size_t k = 0; k < g.size(); ++k) c.add_row({fmt(g.x[k]), fmt(g.y[k]), fmt(g.dx[k]), fmt(g.dy[k])});
  return c;
}

}  // namespace cola::eval
