// Command-line front end: query the catalog, run achievability schemes and
// outer bounds on single problems, or sweep the whole catalog.
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dicap/catalog.hpp"
#include "dicap/report.hpp"

namespace {

using namespace dicap;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

Mask parse_mask_list(const std::string& text, int n) {
  Mask m = 0;
  for (const std::string& tok : split(text, ',')) {
    std::string t = strip(tok);
    if (t.empty()) continue;
    int idx = std::stoi(t);
    if (idx < 1 || idx > n) throw std::runtime_error("message index out of range: " + t);
    m |= Mask{1} << (idx - 1);
  }
  return m;
}

Problem resolve_problem(std::optional<int> no, const std::string& text) {
  if (no) return catalog_entry(*no).problem;
  if (text.empty()) throw std::runtime_error("need --no or --problem");
  return Problem::parse(text);
}

CapacityProfile resolve_caps(const Problem& p, const std::string& cap, const std::string& caps_file) {
  if (caps_file.empty()) return CapacityProfile::uniform(p.n(), Rational::parse(cap));
  std::ifstream in(caps_file);
  if (!in) throw std::runtime_error("cannot open caps file: " + caps_file);
  std::vector<Rational> caps((std::size_t{1} << p.n()) - 1, Rational(0));
  std::string line;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("caps file line without '=': " + line);
    unsigned long mask = std::stoul(strip(line.substr(0, eq)));
    if (mask == 0 || mask > full_mask(p.n())) throw std::runtime_error("caps file server mask out of range: " + line);
    caps[mask - 1] = Rational::parse(strip(line.substr(eq + 1)));
  }
  return CapacityProfile(p.n(), std::move(caps));
}

DeltaSpace resolve_delta(const Problem& p, const std::string& strategy, const std::string& delta_file) {
  if (strategy == "full") return DeltaSpace::full(p);
  if (strategy == "minmax") return DeltaSpace::minimal_and_maximal(p);
  if (strategy != "file") throw std::runtime_error("bad --delta (full|minmax|file)");
  if (delta_file.empty()) throw std::runtime_error("--delta file needs --delta-file");
  std::ifstream in(delta_file);
  if (!in) throw std::runtime_error("cannot open delta file: " + delta_file);
  std::vector<DecodingTuple> tuples;
  std::string line;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;
    DecodingTuple t;
    for (const std::string& part : split(line, ';')) t.sets.push_back(parse_mask_list(part, p.n()));
    tuples.push_back(std::move(t));
  }
  return DeltaSpace::custom(p, tuples);
}

ServerGrouping resolve_groups(const Problem& p, const std::string& groups_file) {
  if (groups_file.empty()) return ServerGrouping::single_all_server(p.n());
  std::ifstream in(groups_file);
  if (!in) throw std::runtime_error("cannot open groups file: " + groups_file);
  ServerGrouping g;
  std::string line;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<Mask> group;
    for (const std::string& part : split(line, ';')) group.push_back(parse_mask_list(part, p.n()));
    g.groups.push_back(std::move(group));
  }
  if (g.groups.empty()) throw std::runtime_error("groups file has no groups");
  return g;
}

std::string rational_str(const std::optional<Rational>& r) { return r ? r->str() : "-"; }

std::string mask_str(Mask m) {
  std::string s;
  for_each_bit(m, [&](int i) {
    if (!s.empty()) s += ",";
    s += std::to_string(i + 1);
  });
  return "{" + s + "}";
}

int cmd_catalog(std::optional<int> no, bool count, const std::string& cls, const std::string& format) {
  const auto& entries = load_catalog();
  if (count) {
    std::cout << entries.size() << "\n";
    return 0;
  }
  if (no) {
    const CatalogEntry& e = catalog_entry(*no);
    if (format == "json") {
      nlohmann::json j{{"problem_no", e.problem_no},
                       {"problem", e.problem.render()},
                       {"sum_rate", e.table_sum_rate.str()},
                       {"class", std::string(to_string(e.table_class))}};
      std::cout << j.dump() << "\n";
    } else {
      std::cout << e.problem.render() << "  sum_rate=" << e.table_sum_rate.str() << "\n";
    }
    return 0;
  }
  if (!cls.empty()) {
    TableClass want = table_class_from_string(cls);
    bool first = true;
    for (const CatalogEntry& e : entries) {
      if (e.table_class == want) {
        std::cout << (first ? "" : ", ") << e.problem_no;
        first = false;
      }
    }
    std::cout << "\n";
    return 0;
  }
  for (const CatalogEntry& e : entries) {
    std::cout << "Problem No " << e.problem_no << ": " << e.problem.render() << "  sum_rate=" << e.table_sum_rate.str()
              << " class=" << to_string(e.table_class) << "\n";
  }
  return 0;
}

InnerBoundResult run_scheme(const std::string& scheme, const Problem& p, const CapacityProfile& caps,
                            const Rational& cap, const ObjectiveSpec& objective, const DeltaSpace& delta,
                            const ServerGrouping& grouping, const InnerOptions& options) {
  if (scheme == "cc") return centralized_cc_original(p, cap, objective, delta, options);
  if (scheme == "cc-enhanced") return centralized_cc_enhanced(p, cap, objective, delta, options);
  if (scheme == "dist") return distributed_cc_allserver(p, caps, objective, delta, true, options);
  if (scheme == "dist-nonenhanced") return distributed_cc_allserver(p, caps, objective, delta, false, options);
  if (scheme == "fractional") return distributed_cc_fractional(p, caps, grouping, objective, options);
  throw std::runtime_error("bad --scheme (cc|cc-enhanced|dist|dist-nonenhanced|fractional)");
}

void dump_scheme_lp(const std::string& scheme, const Problem& p, const CapacityProfile& caps,
                    const Rational& cap, const ObjectiveSpec& objective, const DeltaSpace& delta,
                    const ServerGrouping& grouping, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  if (scheme == "cc" || scheme == "cc-enhanced") {
    dump_lp(build_centralized_lp(p, cap, objective, delta, scheme == "cc-enhanced"), out);
  } else if (scheme == "dist") {
    dump_lp(build_allserver_lp(p, caps, objective, delta), out);
  } else if (scheme == "dist-nonenhanced") {
    dump_lp(build_nonenhanced_hull_lp(p, caps, objective, delta), out);
  } else {
    dump_lp(build_fractional_lp(p, caps, grouping, objective), out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inner and outer bounds on distributed index coding capacity"};
  app.require_subcommand(1);

  auto* cat = app.add_subcommand("catalog", "List or query the bundled problem catalog");
  std::optional<int> cat_no;
  bool cat_count = false;
  std::string cat_class, cat_format = "text";
  cat->add_option("--no", cat_no, "Problem number (1..218)");
  cat->add_flag("--count", cat_count, "Print the number of entries");
  cat->add_option("--class", cat_class, "List problem numbers with this class tag");
  cat->add_option("--format", cat_format, "text|json")->check(CLI::IsMember({"text", "json"}));

  auto* enumerate = app.add_subcommand("enumerate", "Enumerate non-isomorphic problems");
  int enum_n = 4;
  bool enum_count = false;
  enumerate->add_option("--n", enum_n, "Number of messages")->required();
  enumerate->add_flag("--count", enum_count, "Print only the class count");

  std::optional<int> arg_no;
  std::string arg_problem, arg_cap = "1", arg_caps_file, arg_delta = "full", arg_delta_file, arg_groups_file;
  std::string arg_objective = "sum", arg_format = "text", arg_dump_lp;
  int arg_jobs = 1;

  auto add_problem_opts = [&](CLI::App* cmd) {
    cmd->add_option("--no", arg_no, "Catalog problem number");
    cmd->add_option("--problem", arg_problem, "Problem text, e.g. \"(1|-),(2|3),(3|2)\"");
    cmd->add_option("--cap", arg_cap, "Uniform link capacity (rational or decimal)");
    cmd->add_option("--caps-file", arg_caps_file, "Per-server capacities, lines J_mask=value");
  };

  auto* inner = app.add_subcommand("inner", "Composite-coding achievability value");
  std::string arg_scheme = "dist";
  add_problem_opts(inner);
  inner->add_option("--scheme", arg_scheme, "cc|cc-enhanced|dist|dist-nonenhanced|fractional")
      ->check(CLI::IsMember({"cc", "cc-enhanced", "dist", "dist-nonenhanced", "fractional"}));
  inner->add_option("--objective", arg_objective, "sum|sym")->check(CLI::IsMember({"sum", "sym"}));
  inner->add_option("--delta", arg_delta, "full|minmax|file")->check(CLI::IsMember({"full", "minmax", "file"}));
  inner->add_option("--delta-file", arg_delta_file, "Decoding tuples, lines like \"1;2,3;3\"");
  inner->add_option("--groups-file", arg_groups_file, "Server groups, lines like \"1,2;2,3\"");
  inner->add_option("--jobs", arg_jobs, "Worker threads");
  inner->add_option("--format", arg_format, "text|json")->check(CLI::IsMember({"text", "json"}));
  inner->add_option("--dump-lp", arg_dump_lp, "Write the monolithic program in LP format");

  auto* outer = app.add_subcommand("outer", "Polymatroid and closure outer bounds");
  add_problem_opts(outer);
  outer->add_option("--format", arg_format, "text|json")->check(CLI::IsMember({"text", "json"}));
  outer->add_option("--dump-lp", arg_dump_lp, "Write the polymatroid program in LP format");

  auto* table = app.add_subcommand("table", "Sweep the catalog: inner vs outer bounds");
  std::string table_output;
  bool check_table = false;
  table->add_option("--jobs", arg_jobs, "Parallel problems");
  table->add_option("--delta", arg_delta, "full|minmax")->check(CLI::IsMember({"full", "minmax"}));
  table->add_option("--format", arg_format, "text|csv|json")->check(CLI::IsMember({"text", "csv", "json"}));
  table->add_option("--output", table_output, "Write the listing to a file instead of stdout");
  table->add_flag("--check-table", check_table, "Exit nonzero unless every inner value matches the reference table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cat->parsed()) return cmd_catalog(cat_no, cat_count, cat_class, cat_format);

    if (enumerate->parsed()) {
      auto problems = enumerate_nonisomorphic(enum_n);
      if (enum_count) {
        std::cout << problems.size() << "\n";
      } else {
        for (const Problem& p : problems) std::cout << p.render() << "\n";
      }
      return 0;
    }

    if (inner->parsed()) {
      Problem p = resolve_problem(arg_no, arg_problem);
      CapacityProfile caps = resolve_caps(p, arg_cap, arg_caps_file);
      Rational cap = Rational::parse(arg_cap);
      ObjectiveSpec objective = arg_objective == "sym" ? ObjectiveSpec::symmetric() : ObjectiveSpec::sum();
      DeltaSpace delta = resolve_delta(p, arg_delta, arg_delta_file);
      ServerGrouping grouping = resolve_groups(p, arg_groups_file);
      InnerOptions options;
      options.threads = std::max(1, arg_jobs);
      if (!arg_dump_lp.empty()) dump_scheme_lp(arg_scheme, p, caps, cap, objective, delta, grouping, arg_dump_lp);
      auto t0 = std::chrono::steady_clock::now();
      InnerBoundResult r = run_scheme(arg_scheme, p, caps, cap, objective, delta, grouping, options);
      double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      auto rational = rationalize(r.value, 64);
      if (arg_format == "json") {
        nlohmann::json j{{"problem", p.render()},
                         {"scheme", arg_scheme},
                         {"objective", arg_objective},
                         {"value", r.value},
                         {"rational", rational ? rational->str() : ""},
                         {"rates", r.rates},
                         {"delta", {{"strategy", std::string(to_string(r.delta_used.strategy))},
                                    {"universe", r.delta_used.universe},
                                    {"activated", r.delta_used.activated}}},
                         {"seconds", seconds}};
        std::cout << j.dump() << "\n";
      } else {
        std::cout << "problem: " << p.render() << "\n";
        std::cout << "value: " << std::fixed << std::setprecision(6) << r.value;
        if (rational) std::cout << " (= " << rational->str() << ")";
        std::cout << "\n";
        std::cout << "delta: " << to_string(r.delta_used.strategy) << " universe=" << r.delta_used.universe
                  << " activated=" << r.delta_used.activated << "\n";
        std::cout << "rates:";
        for (std::size_t i = 0; i < r.rates.size(); ++i) std::cout << " R" << i + 1 << "=" << r.rates[i];
        std::cout << "\n";
        std::cout << "time: " << std::setprecision(3) << seconds << "s\n";
      }
      return 0;
    }

    if (outer->parsed()) {
      Problem p = resolve_problem(arg_no, arg_problem);
      CapacityProfile caps = resolve_caps(p, arg_cap, arg_caps_file);
      if (!arg_dump_lp.empty()) {
        std::ofstream out(arg_dump_lp);
        if (!out) throw std::runtime_error("cannot open " + arg_dump_lp);
        dump_lp(build_polymatroid_lp(p, caps), out);
      }
      OuterBoundResult r = best_outer(p, caps);
      if (arg_format == "json") {
        nlohmann::json j{{"problem", p.render()}, {"thm1", r.thm1_value}, {"best", r.best}};
        if (r.thm2_value) {
          j["thm2"] = r.thm2_value->str();
          j["witness"] = {{"U", mask_str(r.thm2_witness->first)}, {"V", mask_str(r.thm2_witness->second)}};
        } else {
          j["thm2"] = nullptr;
        }
        std::cout << j.dump() << "\n";
      } else {
        std::cout << "problem: " << p.render() << "\n";
        std::cout << "thm1: " << std::fixed << std::setprecision(6) << r.thm1_value << "\n";
        if (r.thm2_value) {
          std::cout << "thm2: " << r.thm2_value->str() << " (U=" << mask_str(r.thm2_witness->first)
                    << ", V=" << mask_str(r.thm2_witness->second) << ")\n";
        } else {
          std::cout << "thm2: inapplicable\n";
        }
        std::cout << "best: " << r.best << "\n";
      }
      return 0;
    }

    if (table->parsed()) {
      SweepOptions options;
      options.jobs = std::max(1, arg_jobs);
      options.delta = arg_delta == "minmax" ? DeltaStrategy::minimal_and_maximal : DeltaStrategy::full;
      SweepResult result = run_catalog_sweep(options);
      std::ostream* out = &std::cout;
      std::ofstream file;
      if (!table_output.empty()) {
        file.open(table_output);
        if (!file) throw std::runtime_error("cannot open " + table_output);
        out = &file;
      }
      if (arg_format == "json") {
        *out << sweep_to_json(result) << "\n";
      } else if (arg_format == "csv") {
        write_reports_csv(result.reports, *out);
      } else {
        write_reports_text(result.reports, *out);
      }
      std::cerr << "summary: thm1_matches=" << result.summary.thm1_matches
                << " thm2_rescues=" << result.summary.thm2_rescues << " gaps=" << result.summary.gaps.size()
                << " table_mismatches=" << result.summary.table_mismatches.size()
                << " failures=" << result.summary.failures << "\n";
      if (!result.summary.v_minimality_flags.empty()) {
        std::cerr << "note: " << result.summary.v_minimality_flags.size()
                  << " problems have inclusion-minimal unlocking sets larger than the minimum size\n";
      }
      for (const auto& [no, msg] : result.errors) std::cerr << "problem " << no << " failed: " << msg << "\n";
      if (result.summary.failures > 0) return 1;
      if (check_table && !result.summary.table_mismatches.empty()) return 1;
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
