// Bound reports over single problems and the bundled catalog: inner value,
// both outer values, match classification, and comparison against the
// reference table.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dicap/catalog.hpp"
#include "dicap/inner.hpp"
#include "dicap/outer.hpp"

namespace dicap {

enum class MatchClass { sum_capacity_established, gap, open };

std::string_view to_string(MatchClass c);

struct BoundReport {
  std::optional<int> problem_no;
  std::string problem_text;
  double inner = 0.0;
  std::optional<Rational> inner_rational;
  double thm1 = 0.0;
  std::optional<Rational> thm2;
  double best_outer = 0.0;
  MatchClass classification = MatchClass::gap;
  std::optional<Rational> table_expected;   // present iff problem_no present
  std::optional<bool> table_match;

  friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

// Inner (all-server enhanced) plus both outer bounds for one problem.
BoundReport report_for(const Problem& p, std::optional<int> problem_no, const CapacityProfile& caps,
                       DeltaStrategy delta, const InnerOptions& options = {});

struct SweepOptions {
  int jobs = 1;
  DeltaStrategy delta = DeltaStrategy::full;
  double match_tol = 1e-4;
};

struct SweepSummary {
  int thm1_matches = 0;   // polymatroid bound meets the inner bound
  int thm2_rescues = 0;   // closure bound closes the remaining distance
  std::vector<int> gaps;  // problems where the best outer bound stays above
  std::vector<int> table_mismatches;
  std::vector<int> v_minimality_flags;  // inclusion-minimal vs minimum-size V differ
  int failures = 0;
};

struct SweepResult {
  std::vector<BoundReport> reports;                    // catalog order
  std::vector<std::pair<int, std::string>> errors;     // (problem_no, message)
  SweepSummary summary;
};

// Unit-capacity sweep over the whole catalog. Per-problem failures are
// recorded and the run continues.
SweepResult run_catalog_sweep(const SweepOptions& options = {});

// Serialization. JSON reports round-trip exactly.
std::string report_to_json(const BoundReport& report);
BoundReport report_from_json(const std::string& text);
std::string sweep_to_json(const SweepResult& result);
void write_reports_csv(const std::vector<BoundReport>& reports, std::ostream& out);
void write_reports_text(const std::vector<BoundReport>& reports, std::ostream& out);

}  // namespace dicap
