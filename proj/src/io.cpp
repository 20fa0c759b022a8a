#include "otda/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace otda {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  std::string s(buf);
  if (s.find_first_of(".eEnif") == std::string::npos) s += ".0";
  return s;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double parse_real(const std::string& cell, std::size_t line_no) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw error(errc::parse_error, "line " + std::to_string(line_no) +
                                       ": not a number: '" + cell + "'");
  if (!std::isfinite(v))
    throw error(errc::parse_error, "line " + std::to_string(line_no) +
                                       ": non-finite value: '" + cell + "'");
  return v;
}

int parse_label(const std::string& cell, std::size_t line_no) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0')
    throw error(errc::parse_error, "line " + std::to_string(line_no) +
                                       ": not an integer label: '" + cell + "'");
  if (v < 1)
    throw error(errc::parse_error, "line " + std::to_string(line_no) +
                                       ": labels must be >= 1, got " + cell);
  return static_cast<int>(v);
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::io_error, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw error(errc::parse_error, "line 1: missing header in " + path);
  std::vector<std::string> header = split_csv_line(strip_cr(line));
  bool labeled = !header.empty() && header.back() == "label";
  std::size_t dim = header.size() - (labeled ? 1 : 0);
  if (dim == 0)
    throw error(errc::parse_error, "line 1: header has no feature columns");
  for (std::size_t k = 0; k < dim; ++k)
    if (header[k] != "f" + std::to_string(k))
      throw error(errc::parse_error,
                  "line 1: expected header column f" + std::to_string(k) +
                      ", got '" + header[k] + "'");

  std::vector<double> values;
  std::vector<int> labels;
  std::size_t rows = 0, line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw error(errc::parse_error,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " cells, got " +
                      std::to_string(cells.size()));
    for (std::size_t k = 0; k < dim; ++k)
      values.push_back(parse_real(cells[k], line_no));
    if (labeled) labels.push_back(parse_label(cells[dim], line_no));
    ++rows;
  }
  if (rows == 0)
    throw error(errc::parse_error, "no data rows in " + path);

  Dataset ds;
  ds.points = Matrix(rows, dim);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < dim; ++k)
      ds.points(i, k) = values[i * dim + k];
  ds.labels = std::move(labels);
  return ds;
}

void write_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw error(errc::io_error, "cannot write " + path);
  for (std::size_t k = 0; k < ds.dim(); ++k) {
    if (k) out << ',';
    out << 'f' << k;
  }
  if (ds.has_labels()) out << ",label";
  out << '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t k = 0; k < ds.dim(); ++k) {
      if (k) out << ',';
      out << format_double(ds.points(i, k));
    }
    if (ds.has_labels()) out << ',' << ds.labels[i];
    out << '\n';
  }
  if (!out) throw error(errc::io_error, "failed writing " + path);
}

void write_report(const nlohmann::ordered_json& report,
                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw error(errc::io_error, "cannot write " + path);
  out << report.dump(2) << '\n';
  if (!out) throw error(errc::io_error, "failed writing " + path);
}

void write_plan(const Matrix& coupling, const std::string& path,
                double dump_threshold) {
  std::ofstream out(path);
  if (!out) throw error(errc::io_error, "cannot write " + path);
  out << "i,j,mass\n";
  for (std::size_t i = 0; i < coupling.rows(); ++i)
    for (std::size_t j = 0; j < coupling.cols(); ++j)
      if (coupling(i, j) > dump_threshold)
        out << i << ',' << j << ',' << format_double(coupling(i, j)) << '\n';
  if (!out) throw error(errc::io_error, "failed writing " + path);
}

void write_plot_data(const Dataset& target,
                     const std::vector<int>& predicted_labels,
                     const std::vector<double>& mu_t,
                     const std::vector<std::uint8_t>& rejected,
                     const std::string& path) {
  if (target.dim() < 2)
    throw error(errc::invalid_input, "plot data needs at least 2 dimensions");
  std::ofstream out(path);
  if (!out) throw error(errc::io_error, "cannot write " + path);
  out << "x,y,true_label,predicted_label,mu_t,rejected\n";
  for (std::size_t j = 0; j < target.size(); ++j) {
    int truth = target.has_labels() ? target.labels[j] : 0;
    out << format_double(target.points(j, 0)) << ','
        << format_double(target.points(j, 1)) << ',' << truth << ','
        << predicted_labels[j] << ',' << format_double(mu_t[j]) << ','
        << (rejected[j] ? 1 : 0) << '\n';
  }
  if (!out) throw error(errc::io_error, "failed writing " + path);
}

}  // namespace otda
