#include "ssdnn/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

namespace ssdnn {
namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, std::size_t column,
                       const std::string& message) {
  std::string where = source + ":" + std::to_string(line);
  if (column > 0) where += ", column " + std::to_string(column);
  throw DataError(where + ": " + message);
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

void write_csv(std::ostream& out, const Dataset& data) {
  data.validate();
  for (Index k = 0; k < data.dim(); ++k) out << 'x' << (k + 1) << ',';
  out << 'y';
  if (data.eps) out << ",eps";
  out << '\n';
  for (Index i = 0; i < data.size(); ++i) {
    for (Index k = 0; k < data.dim(); ++k) out << format_double(data.x(k, i)) << ',';
    out << format_double(data.y(i));
    if (data.eps) out << ',' << format_double((*data.eps)(i));
    out << '\n';
  }
}

void write_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  write_csv(out, data);
  if (!out) throw DataError("write to " + path + " failed");
}

Dataset read_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) fail(source, 1, 0, "missing header");
  const auto header = split(line);
  std::size_t d = 0;
  while (d < header.size() && trim(header[d]) == "x" + std::to_string(d + 1)) ++d;
  if (d == 0) fail(source, 1, 1, "expected covariate columns x1,...,xd");
  if (d >= header.size() || trim(header[d]) != "y") fail(source, 1, d + 1, "expected column y");
  const bool has_eps = header.size() == d + 2;
  if (has_eps && trim(header[d + 1]) != "eps") fail(source, 1, d + 2, "expected column eps");
  if (header.size() > d + 2) fail(source, 1, d + 3, "unexpected extra column");
  const std::size_t width = header.size();

  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != width)
      fail(source, line_no, 0,
           "expected " + std::to_string(width) + " fields, found " + std::to_string(fields.size()));
    for (std::size_t c = 0; c < width; ++c) {
      const auto text = trim(fields[c]);
      double v = 0.0;
      const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
      if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
        fail(source, line_no, c + 1, "not a number: '" + std::string(text) + "'");
      values.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) fail(source, line_no, 0, "no data rows");

  const auto n = static_cast<Index>(rows);
  const auto dim = static_cast<Index>(d);
  Dataset data{Eigen::MatrixXd(dim, n), Eigen::VectorXd(n), std::nullopt};
  if (has_eps) data.eps = Eigen::VectorXd(n);
  for (Index i = 0; i < n; ++i) {
    const double* row = values.data() + static_cast<std::size_t>(i) * width;
    for (Index k = 0; k < dim; ++k) data.x(k, i) = row[k];
    data.y(i) = row[d];
    if (has_eps) (*data.eps)(i) = row[d + 1];
  }
  return data;
}

Dataset read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return read_csv(in, path);
}

}  // namespace ssdnn
