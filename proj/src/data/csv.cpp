#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qsurr/data.hpp"
#include "qsurr/error.hpp"

namespace qsurr::data {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(',', pos);
    cells.push_back(trim(std::string_view(line).substr(pos, next - pos)));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return cells;
}

double parse_cell(const std::string& cell, const std::string& source, std::size_t line,
                  std::size_t col, const std::string& column) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last)
    throw IoError("ParseError", source + ": line " + std::to_string(line) + ", column " +
                                    std::to_string(col + 1) + " ('" + column +
                                    "'): cannot parse '" + cell + "' as a number");
  return v;
}

}  // namespace

CsvResult read_csv(std::istream& in, const std::string& target_column,
                   const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("ParseError", source_name + ": missing header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_line(line);
  std::ptrdiff_t target = -1;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == target_column) target = static_cast<std::ptrdiff_t>(c);
  if (target < 0)
    throw PreconditionError("MissingColumn",
                            source_name + ": target column '" + target_column + "' not found");

  CsvResult out;
  out.data.target_name = target_column;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (static_cast<std::ptrdiff_t>(c) != target) out.data.feature_names.push_back(header[c]);

  std::vector<double> xs, ys;
  std::size_t line_no = 1;
  const std::size_t d = header.size() - 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size())
      throw IoError("ParseError", source_name + ": line " + std::to_string(line_no) + " has " +
                                      std::to_string(cells.size()) + " cells, expected " +
                                      std::to_string(header.size()));
    std::vector<double> row(header.size());
    bool finite = true;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      row[c] = parse_cell(cells[c], source_name, line_no, c, header[c]);
      finite = finite && std::isfinite(row[c]);
    }
    if (!finite) {
      ++out.rejected_rows;
      continue;
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (static_cast<std::ptrdiff_t>(c) == target)
        ys.push_back(row[c]);
      else
        xs.push_back(row[c]);
    }
  }
  const auto n = static_cast<Eigen::Index>(ys.size());
  out.data.X = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      xs.data(), n, static_cast<Eigen::Index>(d));
  out.data.y = Eigen::Map<const Eigen::VectorXd>(ys.data(), n);
  out.data.provenance.push_back({{"op", "load_csv"},
                                 {"source", source_name},
                                 {"target", target_column},
                                 {"rejected_rows", out.rejected_rows}});
  return out;
}

CsvResult load_csv(const std::string& path, const std::string& target_column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_csv(in, target_column, path);
}

void write_csv(std::ostream& out, const Dataset& ds) {
  ds.validate();
  std::ostringstream buf;
  buf.precision(17);
  for (Eigen::Index c = 0; c < ds.cols(); ++c)
    buf << (ds.feature_names.empty() ? "f" + std::to_string(c) : ds.feature_names[c]) << ',';
  buf << ds.target_name << '\n';
  for (Eigen::Index r = 0; r < ds.rows(); ++r) {
    for (Eigen::Index c = 0; c < ds.cols(); ++c) buf << ds.X(r, c) << ',';
    buf << ds.y(r) << '\n';
  }
  out << buf.str();
}

}  // namespace qsurr::data
