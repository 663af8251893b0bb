#include "fracstable/cli/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "fracstable/error.hpp"

namespace fracstable::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, Delimiter d) {
  std::vector<std::string_view> cells;
  if (d == Delimiter::whitespace) {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
      cells.push_back(line.substr(i, j - i));
      i = j;
    }
    return cells;
  }
  const char sep = d == Delimiter::comma ? ',' : '\t';
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

std::optional<std::size_t> as_index(std::string_view s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << source << ":" << line << ": " << what;
  throw DomainError(os.str());
}

}  // namespace

Delimiter parse_delimiter(std::string_view name) {
  if (name == "comma" || name == ",") return Delimiter::comma;
  if (name == "tab" || name == "\\t" || name == "\t") return Delimiter::tab;
  if (name == "whitespace" || name == "space") return Delimiter::whitespace;
  throw DomainError("unknown delimiter '" + std::string(name) + "' (expected comma, tab or whitespace)");
}

IngestResult parse_table(std::istream& in, const IngestSpec& spec, std::string_view source) {
  IngestResult out;
  std::optional<std::size_t> column = as_index(spec.column);
  if (!column && !spec.skip_header) throw DomainError("column '" + spec.column + "' is a name; names need a header row");
  std::string line;
  std::size_t lineno = 0;
  bool header_pending = spec.skip_header;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(line, spec.delimiter);
    if (header_pending) {
      header_pending = false;
      if (!column) {
        auto it = std::find(cells.begin(), cells.end(), std::string_view(spec.column));
        if (it == cells.end()) fail(source, lineno, "column '" + spec.column + "' not found in header");
        column = static_cast<std::size_t>(it - cells.begin());
      }
      continue;
    }
    if (*column >= cells.size()) {
      std::ostringstream os;
      os << "row has " << cells.size() << " fields, column " << *column << " requested";
      fail(source, lineno, os.str());
    }
    const std::string_view cell = cells[*column];
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty() || !std::isfinite(v))
      fail(source, lineno, "non-numeric value '" + std::string(cell) + "'");
    ++out.rows;
    if (spec.drop_nonpositive && !(v > 0.0)) {
      ++out.dropped;
      continue;
    }
    out.values.push_back(v);
  }
  if (out.values.empty()) throw DomainError(std::string(source) + ": no usable rows");
  return out;
}

IngestResult ingest_table(const IngestSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw IoError("cannot open input file '" + spec.path + "'");
  return parse_table(in, spec, spec.path);
}

}  // namespace fracstable::cli
