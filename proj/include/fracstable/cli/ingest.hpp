#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace fracstable::cli {

enum class Delimiter { comma, tab, whitespace };

Delimiter parse_delimiter(std::string_view name);

struct IngestSpec {
  std::string path;
  Delimiter delimiter = Delimiter::whitespace;
  std::string column = "0";  // header name or 0-based index
  bool skip_header = false;
  bool drop_nonpositive = false;
};

struct IngestResult {
  std::vector<double> values;
  std::size_t rows = 0;     // data rows read
  std::size_t dropped = 0;  // rows removed by drop_nonpositive
};

IngestResult ingest_table(const IngestSpec& spec);
IngestResult parse_table(std::istream& in, const IngestSpec& spec, std::string_view source);

}  // namespace fracstable::cli
