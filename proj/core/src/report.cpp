#include "dicap/report.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace dicap {

namespace {

constexpr double kMatchTol = 1e-4;

MatchClass classify(double inner, double best_outer, std::optional<TableClass> table_class) {
  if (std::fabs(inner - best_outer) <= kMatchTol) return MatchClass::sum_capacity_established;
  if (table_class && *table_class == TableClass::open_star) return MatchClass::open;
  return MatchClass::gap;
}

}  // namespace

std::string_view to_string(MatchClass c) {
  switch (c) {
    case MatchClass::sum_capacity_established: return "sum_capacity_established";
    case MatchClass::gap: return "gap";
    case MatchClass::open: return "open";
  }
  return "gap";
}

BoundReport report_for(const Problem& p, std::optional<int> problem_no, const CapacityProfile& caps,
                       DeltaStrategy delta, const InnerOptions& options) {
  BoundReport report;
  report.problem_no = problem_no;
  report.problem_text = p.render();
  DeltaSpace space = decoding_space(p, delta);
  InnerBoundResult inner = distributed_cc_allserver(p, caps, ObjectiveSpec::sum(), space, true, options);
  report.inner = inner.value;
  report.inner_rational = rationalize(inner.value, 64);
  OuterBoundResult outer = best_outer(p, caps);
  report.thm1 = outer.thm1_value;
  report.thm2 = outer.thm2_value;
  report.best_outer = outer.best;
  std::optional<TableClass> table_class;
  if (problem_no) {
    const CatalogEntry& entry = catalog_entry(*problem_no);
    report.table_expected = entry.table_sum_rate;
    report.table_match = std::fabs(inner.value - entry.table_sum_rate.to_double()) <= kMatchTol;
    table_class = entry.table_class;
  }
  report.classification = classify(report.inner, report.best_outer, table_class);
  return report;
}

SweepResult run_catalog_sweep(const SweepOptions& options) {
  const auto& entries = load_catalog();
  SweepResult result;
  result.reports.resize(entries.size());
  std::vector<std::optional<std::string>> errors(entries.size());
  std::vector<bool> v_flag(entries.size(), false);

  const int jobs = std::max(1, options.jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= entries.size()) break;
      const CatalogEntry& entry = entries[idx];
      try {
        CapacityProfile caps = CapacityProfile::uniform(entry.problem.n(), Rational(1));
        result.reports[idx] = report_for(entry.problem, entry.problem_no, caps, options.delta);
        v_flag[idx] = has_larger_inclusion_minimal_v(entry.problem);
      } catch (const std::exception& e) {
        errors[idx] = e.what();
        result.reports[idx].problem_no = entry.problem_no;
        result.reports[idx].problem_text = entry.problem.render();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t idx = 0; idx < entries.size(); ++idx) {
    int no = entries[idx].problem_no;
    if (errors[idx]) {
      result.errors.emplace_back(no, *errors[idx]);
      ++result.summary.failures;
      continue;
    }
    const BoundReport& r = result.reports[idx];
    bool thm1_match = std::fabs(r.thm1 - r.inner) <= options.match_tol;
    bool best_match = std::fabs(r.best_outer - r.inner) <= options.match_tol;
    if (thm1_match) {
      ++result.summary.thm1_matches;
    } else if (best_match) {
      ++result.summary.thm2_rescues;
    }
    if (!best_match) result.summary.gaps.push_back(no);
    if (r.table_match && !*r.table_match) result.summary.table_mismatches.push_back(no);
    if (v_flag[idx]) result.summary.v_minimality_flags.push_back(no);
  }
  return result;
}

namespace {

nlohmann::json rational_json(const Rational& r) {
  return nlohmann::json{{"num", r.num()}, {"den", r.den()}};
}

Rational rational_from_json(const nlohmann::json& j) {
  return Rational(j.at("num").get<std::int64_t>(), j.at("den").get<std::int64_t>());
}

nlohmann::json report_json(const BoundReport& r) {
  nlohmann::json j;
  if (r.problem_no) j["problem_no"] = *r.problem_no;
  j["problem"] = r.problem_text;
  j["inner"] = r.inner;
  if (r.inner_rational) j["inner_rational"] = rational_json(*r.inner_rational);
  j["thm1"] = r.thm1;
  if (r.thm2) j["thm2"] = rational_json(*r.thm2);
  j["best_outer"] = r.best_outer;
  j["classification"] = std::string(to_string(r.classification));
  if (r.table_expected) j["table_expected"] = rational_json(*r.table_expected);
  if (r.table_match) j["table_match"] = *r.table_match;
  return j;
}

BoundReport report_from(const nlohmann::json& j) {
  BoundReport r;
  if (j.contains("problem_no")) r.problem_no = j.at("problem_no").get<int>();
  r.problem_text = j.at("problem").get<std::string>();
  r.inner = j.at("inner").get<double>();
  if (j.contains("inner_rational")) r.inner_rational = rational_from_json(j.at("inner_rational"));
  r.thm1 = j.at("thm1").get<double>();
  if (j.contains("thm2")) r.thm2 = rational_from_json(j.at("thm2"));
  r.best_outer = j.at("best_outer").get<double>();
  std::string cls = j.at("classification").get<std::string>();
  if (cls == "sum_capacity_established") {
    r.classification = MatchClass::sum_capacity_established;
  } else if (cls == "open") {
    r.classification = MatchClass::open;
  } else {
    r.classification = MatchClass::gap;
  }
  if (j.contains("table_expected")) r.table_expected = rational_from_json(j.at("table_expected"));
  if (j.contains("table_match")) r.table_match = j.at("table_match").get<bool>();
  return r;
}

}  // namespace

std::string report_to_json(const BoundReport& report) { return report_json(report).dump(); }

BoundReport report_from_json(const std::string& text) { return report_from(nlohmann::json::parse(text)); }

std::string sweep_to_json(const SweepResult& result) {
  nlohmann::json j;
  j["reports"] = nlohmann::json::array();
  for (const BoundReport& r : result.reports) j["reports"].push_back(report_json(r));
  nlohmann::json errs = nlohmann::json::array();
  for (const auto& [no, msg] : result.errors) errs.push_back({{"problem_no", no}, {"error", msg}});
  j["errors"] = errs;
  j["summary"] = {
      {"thm1_matches", result.summary.thm1_matches},
      {"thm2_rescues", result.summary.thm2_rescues},
      {"gaps", result.summary.gaps},
      {"table_mismatches", result.summary.table_mismatches},
      {"v_minimality_flags", result.summary.v_minimality_flags},
      {"failures", result.summary.failures},
  };
  return j.dump(2);
}

namespace {

std::string format_rational(const std::optional<Rational>& r) { return r ? r->str() : "-"; }

std::string format_double(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << v;
  return out.str();
}

}  // namespace

void write_reports_csv(const std::vector<BoundReport>& reports, std::ostream& out) {
  out << "problem_no,problem,inner,inner_rational,thm1,thm2,best_outer,classification,table_expected,table_match\n";
  for (const BoundReport& r : reports) {
    out << (r.problem_no ? std::to_string(*r.problem_no) : "") << ",\"" << r.problem_text << "\","
        << format_double(r.inner) << "," << format_rational(r.inner_rational) << "," << format_double(r.thm1) << ","
        << format_rational(r.thm2) << "," << format_double(r.best_outer) << "," << to_string(r.classification) << ","
        << format_rational(r.table_expected) << "," << (r.table_match ? (*r.table_match ? "yes" : "no") : "") << "\n";
  }
}

void write_reports_text(const std::vector<BoundReport>& reports, std::ostream& out) {
  out << std::left << std::setw(5) << "no" << std::setw(42) << "problem" << std::setw(12) << "inner"
      << std::setw(10) << "thm1" << std::setw(10) << "thm2" << std::setw(12) << "best_outer" << std::setw(26)
      << "classification" << "table\n";
  for (const BoundReport& r : reports) {
    std::string thm2 = r.thm2 ? format_double(r.thm2->to_double()) : "-";
    std::string table;
    if (r.table_expected) {
      table = r.table_expected->str() + (r.table_match && *r.table_match ? " ok" : " MISMATCH");
    }
    out << std::left << std::setw(5) << (r.problem_no ? std::to_string(*r.problem_no) : "-") << std::setw(42)
        << r.problem_text << std::setw(12) << format_double(r.inner) << std::setw(10) << format_double(r.thm1)
        << std::setw(10) << thm2 << std::setw(12) << format_double(r.best_outer) << std::setw(26)
        << to_string(r.classification) << table << "\n";
  }
}

}  // namespace dicap
