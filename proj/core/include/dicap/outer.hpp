// Converse bounds on the sum-rate: a polymatroidal linear program over one
// set function per message subset, and an exact closure-based bound that
// charges twice for the links that can still carry fresh information once
// the freely decodable messages are removed.
#pragma once

#include <optional>
#include <utility>

#include "dicap/closure.hpp"
#include "dicap/lp.hpp"
#include "dicap/problem.hpp"

namespace dicap {

enum class PolymatroidGrounding {
  whole_set,   // f_T(T) bounded by the total capacity of links meeting T
  per_subset,  // every f_T(S) bounded by links meeting S (and T)
};

// Optimal value of the polymatroidal program: variables R_i and f_T(S) for
// nonempty S inside each nonempty T, elemental monotonicity and
// submodularity, capacity grounding, and per-receiver decoding inequalities
// R_i <= f_T(B_i^T + i) - f_T(B_i^T) with interference restricted to T.
double thm1_polymatroid(const Problem& p, const CapacityProfile& caps,
                        PolymatroidGrounding grounding = PolymatroidGrounding::whole_set);

// The materialized program, for dumps and cross-checks.
LinearProgram build_polymatroid_lp(const Problem& p, const CapacityProfile& caps,
                                   PolymatroidGrounding grounding = PolymatroidGrounding::whole_set);

struct ClosureSumBound {
  Rational value;
  Mask u = 0;
  Mask v = 0;
};

// Closure-based sum-rate bound: over minimum-cardinality unlocking sets V
// that are themselves decodable given everything else, the bound
// sum_J C_J + sum_{J meets V, J not inside UV} C_J, minimized. Empty when no
// candidate V qualifies.
std::optional<ClosureSumBound> thm2_sum_bound(const Problem& p, const CapacityProfile& caps);

struct OuterBoundResult {
  double thm1_value = 0.0;
  std::optional<Rational> thm2_value;
  double best = 0.0;  // min of the available bounds
  std::optional<std::pair<Mask, Mask>> thm2_witness;  // (U, V)
};

OuterBoundResult best_outer(const Problem& p, const CapacityProfile& caps,
                            PolymatroidGrounding grounding = PolymatroidGrounding::whole_set);

}  // namespace dicap
