#include "tdde/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tdde {
namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim whitespace and CR
    std::size_t a = cell.find_first_not_of(" \t\r");
    std::size_t b = cell.find_last_not_of(" \t\r");
    cells.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
  }
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

struct RawCsv {
  std::vector<std::string> header;  // empty if none
  std::vector<std::vector<double>> rows;
};

RawCsv read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  RawCsv out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_line(line);
    std::vector<double> row(cells.size());
    bool numeric = true;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!parse_double(cells[i], row[i])) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (out.rows.empty() && out.header.empty()) {
        out.header = cells;  // header row
        width = cells.size();
        continue;
      }
      throw ParseError(path + ": non-numeric cell at line " + std::to_string(line_no));
    }
    if (width == 0) width = row.size();
    if (row.size() != width)
      throw ParseError(path + ": ragged row at line " + std::to_string(line_no) +
                       " (expected " + std::to_string(width) + " cells, got " +
                       std::to_string(row.size()) + ")");
    out.rows.push_back(std::move(row));
  }
  return out;
}

void normalize_in_place(Matrix& m) {
  for (std::size_t i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) s += m.at(i, j) * m.at(i, j);
    s = std::sqrt(s);
    if (s > 0.0)
      for (std::size_t j = 0; j < m.cols; ++j) m.at(i, j) /= s;
  }
}

}  // namespace

Matrix load_csv(const std::string& path, bool normalize_rows) {
  RawCsv raw = read_csv(path);
  Matrix m = Matrix::from_rows(raw.rows);
  if (normalize_rows) normalize_in_place(m);
  return m;
}

LabeledData load_labeled_csv(const std::string& path, const std::string& label_column,
                             bool normalize_rows) {
  RawCsv raw = read_csv(path);
  if (raw.rows.empty()) throw ParseError(path + ": no data rows");
  const std::size_t width = raw.rows.front().size();

  std::size_t label_idx = width;  // resolve by header name, else by index
  for (std::size_t i = 0; i < raw.header.size(); ++i)
    if (raw.header[i] == label_column) label_idx = i;
  if (label_idx == width) {
    double v;
    if (parse_double(label_column, v) && v >= 0 && v < static_cast<double>(width))
      label_idx = static_cast<std::size_t>(v);
    else
      throw ParseError(path + ": label column '" + label_column + "' not found");
  }

  LabeledData out;
  out.features = Matrix(raw.rows.size(), width - 1);
  out.labels.resize(raw.rows.size());
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    const auto& row = raw.rows[i];
    const double lv = row[label_idx];
    if (lv != 0.0 && lv != 1.0)
      throw ParseError(path + ": label at row " + std::to_string(i) + " is not 0/1");
    out.labels[i] = static_cast<int>(lv);
    std::size_t c = 0;
    for (std::size_t j = 0; j < width; ++j)
      if (j != label_idx) out.features.at(i, c++) = row[j];
  }
  if (normalize_rows) normalize_in_place(out.features);
  return out;
}

void save_matrix_csv(const Matrix& m, const std::string& path,
                     const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out.precision(17);
  if (!header.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j)
      out << header[j] << (j + 1 < header.size() ? "," : "\n");
  }
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j)
      out << m.at(i, j) << (j + 1 < m.cols ? "," : "\n");
  }
}

}  // namespace tdde
