// Composite-coding achievability bounds. Four schemes: centralized original
// (composite rates shared across decoding choices, regions convexified),
// centralized enhanced (rate splitting, composite rates per decoding choice),
// all-server distributed (enhanced and non-enhanced), and fractional
// distributed (servers join capacity-sharing groups).
//
// Every scheme reduces to linear programs. Programs whose variables range
// over the whole decoding space are solved by block generation: tuples enter
// the program only when a pricing step proves they can improve the optimum,
// and the run terminates with the exact full-space optimum once no tuple
// prices positive.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dicap/delta.hpp"
#include "dicap/lp.hpp"
#include "dicap/problem.hpp"

namespace dicap {

// The requested decoding space exceeds the configured size cap.
struct DeltaTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ObjectiveKind { sum_rate, symmetric_rate, weighted };

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::sum_rate;
  std::vector<double> weights;  // used when kind == weighted

  static ObjectiveSpec sum() { return {ObjectiveKind::sum_rate, {}}; }
  static ObjectiveSpec symmetric() { return {ObjectiveKind::symmetric_rate, {}}; }
  static ObjectiveSpec weighted(std::vector<double> w) { return {ObjectiveKind::weighted, std::move(w)}; }
};

struct DeltaDescriptor {
  DeltaStrategy strategy = DeltaStrategy::full;
  std::uint64_t universe = 0;   // tuples in the requested space
  std::uint64_t activated = 0;  // tuples carrying variables in the final program
};

struct InnerBoundResult {
  ObjectiveSpec objective;
  double value = 0.0;
  std::vector<double> rates;    // per-message totals from the optimal primal
  DeltaDescriptor delta_used;
};

// Server groups for the fractional scheme; groups may overlap.
struct ServerGrouping {
  std::vector<std::vector<Mask>> groups;

  static ServerGrouping single_all_server(int n);
  // I(P): messages held by at least one server of group g.
  Mask messages(std::size_t g) const;
};

struct InnerOptions {
  // Cap on |Delta| x per-tuple variable count before any program is built.
  std::uint64_t max_nonzeros = 5'000'000;
  // Worker threads for pricing sweeps.
  int threads = 1;
};

InnerBoundResult centralized_cc_original(const Problem& p, const Rational& capacity,
                                         const ObjectiveSpec& objective, const DeltaSpace& delta,
                                         const InnerOptions& options = {});
InnerBoundResult centralized_cc_enhanced(const Problem& p, const Rational& capacity,
                                         const ObjectiveSpec& objective, const DeltaSpace& delta,
                                         const InnerOptions& options = {});
InnerBoundResult distributed_cc_allserver(const Problem& p, const CapacityProfile& caps,
                                          const ObjectiveSpec& objective, const DeltaSpace& delta,
                                          bool enhanced, const InnerOptions& options = {});
InnerBoundResult distributed_cc_fractional(const Problem& p, const CapacityProfile& caps,
                                           const ServerGrouping& grouping, const ObjectiveSpec& objective,
                                           const InnerOptions& options = {});

// Convexified (time-shared) variants of the non-rate-split schemes, solved
// over the whole space at once. Linear objectives attain the same optimum as
// the per-tuple maximization; kept as an independent route for checks and
// used directly for the symmetric objective.
InnerBoundResult centralized_cc_original_hull(const Problem& p, const Rational& capacity,
                                              const ObjectiveSpec& objective, const DeltaSpace& delta,
                                              const InnerOptions& options = {});
InnerBoundResult distributed_cc_nonenhanced_hull(const Problem& p, const CapacityProfile& caps,
                                                 const ObjectiveSpec& objective, const DeltaSpace& delta,
                                                 const InnerOptions& options = {});

// Monolithic program materializations over the whole decoding space, with
// named rows and variables; intended for dumps and structural checks on
// small spaces (subject to the same size cap).
LinearProgram build_allserver_lp(const Problem& p, const CapacityProfile& caps,
                                 const ObjectiveSpec& objective, const DeltaSpace& delta,
                                 const InnerOptions& options = {});
LinearProgram build_centralized_lp(const Problem& p, const Rational& capacity,
                                   const ObjectiveSpec& objective, const DeltaSpace& delta, bool enhanced,
                                   const InnerOptions& options = {});
LinearProgram build_nonenhanced_hull_lp(const Problem& p, const CapacityProfile& caps,
                                        const ObjectiveSpec& objective, const DeltaSpace& delta,
                                        const InnerOptions& options = {});
LinearProgram build_fractional_lp(const Problem& p, const CapacityProfile& caps,
                                  const ServerGrouping& grouping, const ObjectiveSpec& objective,
                                  const InnerOptions& options = {});

}  // namespace dicap
