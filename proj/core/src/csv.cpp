#include "ngkde/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ngkde {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_double(const std::string& text, double* out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* begin = t.data();
  const char* end = begin + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && ptr == end;
}

std::size_t resolve(const ColumnRef& col, const std::vector<std::string>& header,
                    bool has_header) {
  if (col.by_index) return col.idx;
  if (!has_header)
    throw std::invalid_argument("csv: column '" + col.label +
                                "' requested by name but the file has no header");
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == col.label) return i;
  throw std::invalid_argument("csv: no column named '" + col.label + "'");
}

}  // namespace

ColumnRef ColumnRef::parse(const std::string& text) {
  const std::string t = trim(text);
  if (!t.empty() &&
      std::all_of(t.begin(), t.end(),
                  [](unsigned char c) { return std::isdigit(c); })) {
    return ColumnRef::index(std::stoull(t));
  }
  return ColumnRef::name(t);
}

IngestResult ingest_csv(const std::string& path, const ColumnRef& col_x1,
                        const ColumnRef& col_x2, bool log10_x1,
                        bool log10_x2) {
  std::ifstream file(path);
  if (!file) throw std::invalid_argument("csv: cannot open " + path);

  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::size_t> line_numbers;
  while (std::getline(file, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    rows.push_back(split_row(line));
    line_numbers.push_back(line_no);
  }
  if (rows.empty()) throw std::invalid_argument("csv: empty file " + path);

  // header detection: a first row with any non-numeric field is a header
  bool has_header = false;
  for (const auto& field : rows.front()) {
    double v;
    if (!parse_double(field, &v)) {
      has_header = true;
      break;
    }
  }
  const std::size_t i1 = resolve(col_x1, rows.front(), has_header);
  const std::size_t i2 = resolve(col_x2, rows.front(), has_header);

  IngestResult result;
  for (std::size_t r = has_header ? 1 : 0; r < rows.size(); ++r) {
    const auto& fields = rows[r];
    const std::size_t ln = line_numbers[r];
    if (i1 >= fields.size() || i2 >= fields.size()) {
      result.rejected.push_back({ln, "too few fields"});
      continue;
    }
    double v1, v2;
    if (!parse_double(fields[i1], &v1) || !parse_double(fields[i2], &v2)) {
      result.rejected.push_back({ln, "non-numeric field"});
      continue;
    }
    if (log10_x1) v1 = std::log10(v1);
    if (log10_x2) v2 = std::log10(v2);
    if (!std::isfinite(v1) || !std::isfinite(v2)) {
      result.rejected.push_back({ln, "non-finite after transform"});
      continue;
    }
    if (v2 < 0.0) {
      result.rejected.push_back({ln, "negative value in the nonnegative role"});
      continue;
    }
    result.sample.push_back({v1, v2});
  }
  if (result.sample.empty())
    throw std::invalid_argument("csv: no usable rows in " + path);
  return result;
}

}  // namespace ngkde
