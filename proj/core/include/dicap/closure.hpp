// Decodability closure: which messages are recoverable from all server
// outputs once the messages in a seed set are known. A receiver's exact
// decoding condition lets message i join as soon as A_i is covered, so
// zero-entropy set queries reduce to a monotone fixed point.
#pragma once

#include <vector>

#include "dicap/problem.hpp"

namespace dicap {

struct ClosureResult {
  Mask known = 0;              // fixed point containing the seed
  std::vector<int> order;      // messages added beyond the seed, in add order
};

// Smallest superset of `seed` closed under "add i whenever A_i is known".
// Passes scan receivers in ascending index, so the order is deterministic.
ClosureResult closure(const Problem& p, Mask seed);

// Largest U with every message in U decodable from the server outputs alone.
Mask compute_U(const Problem& p);

// All minimum-cardinality V inside the complement of U whose knowledge,
// together with U, unlocks every remaining message. When U = [n] the empty
// set is the sole candidate. Candidates of the minimal size are returned in
// ascending mask order.
std::vector<Mask> compute_V_candidates(const Problem& p, Mask u);

// True iff V is decodable once all other messages are known.
bool check_condition1(const Problem& p, Mask v);

// True when some inclusion-minimal unlocking set V has larger cardinality
// than the minimum; the sweep reports such problems instead of guessing
// which notion of "smallest" was intended.
bool has_larger_inclusion_minimal_v(const Problem& p);

}  // namespace dicap
