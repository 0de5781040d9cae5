// Decoding set tuples. Receiver i commits to recovering a set D_i that
// contains its own message and avoids its side information; a tuple picks
// one such set per receiver, and the composite-coding schemes optimize over
// a space of tuples.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dicap/problem.hpp"

namespace dicap {

// D_i violates i in D_i or D_i disjoint from A_i.
struct InvalidDecodingSet : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DecodingTuple {
  std::vector<Mask> sets;  // one per receiver
};

enum class DeltaStrategy { full, minimal_and_maximal, custom };

std::string_view to_string(DeltaStrategy s);

// An ordered, duplicate-free list of decoding tuples, stored flat.
class DeltaSpace {
 public:
  static DeltaSpace full(const Problem& p);
  static DeltaSpace minimal_and_maximal(const Problem& p);
  static DeltaSpace custom(const Problem& p, const std::vector<DecodingTuple>& tuples);

  int n() const { return n_; }
  std::size_t size() const { return flat_.size() / static_cast<std::size_t>(n_); }
  Mask set(std::size_t tuple, int receiver) const {
    return flat_[tuple * static_cast<std::size_t>(n_) + static_cast<std::size_t>(receiver)];
  }
  DeltaStrategy strategy() const { return strategy_; }

  // Number of tuples the full product space would have.
  static std::uint64_t full_size(const Problem& p);

 private:
  DeltaSpace(int n, DeltaStrategy strategy) : n_(n), strategy_(strategy) {}
  int n_;
  DeltaStrategy strategy_;
  std::vector<Mask> flat_;
};

DeltaSpace decoding_space(const Problem& p, DeltaStrategy strategy,
                          const std::vector<DecodingTuple>& custom_tuples = {});

}  // namespace dicap
