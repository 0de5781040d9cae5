#include "dicap/closure.hpp"

#include <algorithm>

namespace dicap {

ClosureResult closure(const Problem& p, Mask seed) {
  ClosureResult result;
  result.known = seed & p.all_messages();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < p.n(); ++i) {
      if (result.known & (Mask{1} << i)) continue;
      if (subset_of(p.side_info(i), result.known)) {
        result.known |= Mask{1} << i;
        result.order.push_back(i);
        changed = true;
      }
    }
  }
  return result;
}

Mask compute_U(const Problem& p) { return closure(p, 0).known; }

std::vector<Mask> compute_V_candidates(const Problem& p, Mask u) {
  Mask all = p.all_messages();
  if (u == all) return {0};
  Mask rest = all & ~u;
  int rest_bits = popcount(rest);
  for (int size = 1; size <= rest_bits; ++size) {
    std::vector<Mask> found;
    for_each_subset(rest, [&](Mask v) {
      if (popcount(v) == size && closure(p, u | v).known == all) found.push_back(v);
    });
    if (!found.empty()) {
      std::sort(found.begin(), found.end());
      return found;
    }
  }
  return {};  // unreachable: v = rest always unlocks everything
}

bool check_condition1(const Problem& p, Mask v) {
  Mask all = p.all_messages();
  return closure(p, all & ~v).known == all;
}

bool has_larger_inclusion_minimal_v(const Problem& p) {
  Mask all = p.all_messages();
  Mask u = compute_U(p);
  if (u == all) return false;
  Mask rest = all & ~u;
  auto unlocks = [&](Mask v) { return closure(p, u | v).known == all; };
  int min_size = 0;
  {
    auto cands = compute_V_candidates(p, u);
    min_size = cands.empty() ? popcount(rest) : popcount(cands.front());
  }
  bool larger = false;
  for_each_subset(rest, [&](Mask v) {
    if (larger || popcount(v) <= min_size || !unlocks(v)) return;
    bool minimal = true;
    for_each_bit(v, [&](int i) {
      if (unlocks(v & ~(Mask{1} << i))) minimal = false;
    });
    if (minimal) larger = true;
  });
  return larger;
}

}  // namespace dicap
