#pragma once

#include <string>
#include <vector>

#include "ngkde/types.hpp"

namespace ngkde {

//! A column picked either by zero-based index or by header name.
struct ColumnRef {
  static ColumnRef index(std::size_t i) { return {true, i, {}}; }
  static ColumnRef name(std::string n) { return {false, 0, std::move(n)}; }
  //! Digits parse as an index, anything else as a name.
  static ColumnRef parse(const std::string& text);

  bool by_index = true;
  std::size_t idx = 0;
  std::string label;
};

struct RejectedRow {
  std::size_t line = 0;  // 1-based line number in the file
  std::string reason;
};

struct IngestResult {
  std::vector<Obs2> sample;
  std::vector<RejectedRow> rejected;
};

//! Reads comma-separated rows (optional header) and assembles observations
//! from the two chosen columns, applying log10 where flagged. Rows whose
//! values come out non-finite, or negative in the x2 role, are rejected
//! with a per-row reason. Throws when the file, a named column, or every
//! row is unusable.
IngestResult ingest_csv(const std::string& path, const ColumnRef& col_x1,
                        const ColumnRef& col_x2, bool log10_x1, bool log10_x2);

}  // namespace ngkde
