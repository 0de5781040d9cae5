// Bitmask helpers for message subsets. Messages are 0-based bits; a server
// is identified with the mask of messages it stores.
#pragma once

#include <bit>
#include <cstdint>

namespace dicap {

using Mask = std::uint32_t;

inline int popcount(Mask m) { return std::popcount(m); }

inline bool subset_of(Mask a, Mask b) { return (a & ~b) == 0; }

inline Mask full_mask(int n) { return (Mask{1} << n) - 1; }

// Visits every subset of `m` (including the empty set and `m` itself) in
// decreasing mask order.
template <typename F>
void for_each_subset(Mask m, F&& f) {
  Mask s = m;
  while (true) {
    f(s);
    if (s == 0) break;
    s = (s - 1) & m;
  }
}

template <typename F>
void for_each_bit(Mask m, F&& f) {
  while (m) {
    int i = std::countr_zero(m);
    f(i);
    m &= m - 1;
  }
}

}  // namespace dicap
