// The bundled list of all 218 non-isomorphic four-message instances,
// together with the reference sum-rate table and its classification tags.
#pragma once

#include <stdexcept>
#include <string_view>
#include <vector>

#include "dicap/problem.hpp"

namespace dicap {

struct CatalogCorrupt : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class TableClass { normal, bold, underlined, double_underlined, overlined, open_star };

std::string_view to_string(TableClass c);
TableClass table_class_from_string(std::string_view s);

struct CatalogEntry {
  int problem_no;              // 1..218
  Problem problem;
  Rational table_sum_rate;     // exact: 18.667 is stored as 56/3
  TableClass table_class;
};

// The embedded catalog; validated (checksum + shape) on first use and cached.
const std::vector<CatalogEntry>& load_catalog();

// The embedded catalog text, one "Problem No K: <problem text>" line per
// entry, exactly as shipped in core/data/catalog.txt.
std::string_view catalog_source_text();

// Parses catalog data from text ("Problem No K: <problem>" lines) plus the
// sum-rate sidecar (problem_no, numerator, denominator, class). Throws
// CatalogCorrupt on any shape violation.
std::vector<CatalogEntry> load_catalog_from(std::string_view catalog_text, std::string_view sum_rates_text);

// Entry lookup by problem number; throws std::out_of_range for bad numbers.
const CatalogEntry& catalog_entry(int problem_no);

}  // namespace dicap
