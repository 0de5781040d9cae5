#include "dicap/catalog.hpp"

#include <cstdint>
#include <set>
#include <sstream>

namespace dicap {

namespace data {
extern const char kCatalogText[];
extern const char kSumRatesText[];
}  // namespace data

namespace {

constexpr std::uint64_t kCatalogChecksum = 0x8939b9c340317f4aULL;
constexpr std::uint64_t kSumRatesChecksum = 0xcd5cbe93193c7343ULL;

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string_view to_string(TableClass c) {
  switch (c) {
    case TableClass::normal: return "normal";
    case TableClass::bold: return "bold";
    case TableClass::underlined: return "underlined";
    case TableClass::double_underlined: return "double_underlined";
    case TableClass::overlined: return "overlined";
    case TableClass::open_star: return "open_star";
  }
  return "normal";
}

TableClass table_class_from_string(std::string_view s) {
  if (s == "normal") return TableClass::normal;
  if (s == "bold") return TableClass::bold;
  if (s == "underlined") return TableClass::underlined;
  if (s == "double_underlined") return TableClass::double_underlined;
  if (s == "overlined") return TableClass::overlined;
  if (s == "open_star") return TableClass::open_star;
  throw CatalogCorrupt("unknown table class: " + std::string(s));
}

std::vector<CatalogEntry> load_catalog_from(std::string_view catalog_text, std::string_view sum_rates_text) {
  std::vector<CatalogEntry> entries;
  {
    std::istringstream in{std::string(catalog_text)};
    std::string line;
    int expected = 1;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const std::string prefix = "Problem No ";
      if (line.rfind(prefix, 0) != 0) throw CatalogCorrupt("bad catalog line: " + line);
      std::size_t colon = line.find(": ");
      if (colon == std::string::npos) throw CatalogCorrupt("bad catalog line: " + line);
      int no = 0;
      try {
        no = std::stoi(line.substr(prefix.size(), colon - prefix.size()));
      } catch (const std::exception&) {
        throw CatalogCorrupt("bad problem number in: " + line);
      }
      if (no != expected) throw CatalogCorrupt("catalog numbering gap at " + std::to_string(expected));
      try {
        entries.push_back({no, Problem::parse(line.substr(colon + 2)), Rational(0), TableClass::normal});
      } catch (const ParseError& err) {
        throw CatalogCorrupt("unparseable catalog problem " + std::to_string(no) + ": " + err.what());
      }
      ++expected;
    }
  }
  if (entries.empty()) throw CatalogCorrupt("empty catalog");
  {
    std::istringstream in{std::string(sum_rates_text)};
    std::string line;
    std::set<int> seen;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream row(line);
      int no = 0;
      long long num = 0, den = 0;
      std::string cls;
      if (!(row >> no >> num >> den >> cls)) throw CatalogCorrupt("bad sum-rate line: " + line);
      if (no < 1 || no > static_cast<int>(entries.size())) throw CatalogCorrupt("sum-rate row out of range");
      if (!seen.insert(no).second) throw CatalogCorrupt("duplicate sum-rate row " + std::to_string(no));
      CatalogEntry& e = entries[static_cast<std::size_t>(no - 1)];
      e.table_sum_rate = Rational(num, den);
      if (!(Rational(0) < e.table_sum_rate)) throw CatalogCorrupt("non-positive sum rate for " + std::to_string(no));
      e.table_class = table_class_from_string(cls);
    }
    if (seen.size() != entries.size()) throw CatalogCorrupt("sum-rate table incomplete");
  }
  // Entries must be pairwise non-isomorphic.
  std::set<Problem> canonicals;
  for (const CatalogEntry& e : entries) {
    if (!canonicals.insert(e.problem.canonical()).second) {
      throw CatalogCorrupt("catalog entries are not pairwise non-isomorphic");
    }
  }
  return entries;
}

const std::vector<CatalogEntry>& load_catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    if (fnv1a(data::kCatalogText) != kCatalogChecksum || fnv1a(data::kSumRatesText) != kSumRatesChecksum) {
      throw CatalogCorrupt("embedded catalog checksum mismatch");
    }
    auto loaded = load_catalog_from(data::kCatalogText, data::kSumRatesText);
    if (loaded.size() != 218) throw CatalogCorrupt("expected 218 catalog entries");
    return loaded;
  }();
  return entries;
}

std::string_view catalog_source_text() { return data::kCatalogText; }

const CatalogEntry& catalog_entry(int problem_no) {
  const auto& entries = load_catalog();
  if (problem_no < 1 || problem_no > static_cast<int>(entries.size())) {
    throw std::out_of_range("catalog_entry: problem number out of range");
  }
  return entries[static_cast<std::size_t>(problem_no - 1)];
}

}  // namespace dicap
