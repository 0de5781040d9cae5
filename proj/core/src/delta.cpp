#include "dicap/delta.hpp"

#include <algorithm>
#include <set>

namespace dicap {

std::string_view to_string(DeltaStrategy s) {
  switch (s) {
    case DeltaStrategy::full: return "full";
    case DeltaStrategy::minimal_and_maximal: return "minmax";
    case DeltaStrategy::custom: return "custom";
  }
  return "full";
}

namespace {

// All valid D_i for receiver i, ascending by mask.
std::vector<Mask> receiver_choices(const Problem& p, int i) {
  Mask optional = p.all_messages() & ~p.side_info(i) & ~(Mask{1} << i);
  std::vector<Mask> out;
  for_each_subset(optional, [&](Mask s) { out.push_back(s | (Mask{1} << i)); });
  std::sort(out.begin(), out.end());
  return out;
}

void check_tuple(const Problem& p, const DecodingTuple& t) {
  if (t.sets.size() != static_cast<std::size_t>(p.n())) {
    throw InvalidDecodingSet("decoding tuple must list one set per receiver");
  }
  for (int i = 0; i < p.n(); ++i) {
    Mask d = t.sets[static_cast<std::size_t>(i)];
    if (!(d & (Mask{1} << i))) {
      throw InvalidDecodingSet("receiver " + std::to_string(i + 1) + " must decode its own message");
    }
    if (d & p.side_info(i)) {
      throw InvalidDecodingSet("receiver " + std::to_string(i + 1) + " decodes known side information");
    }
    if (d & ~p.all_messages()) {
      throw InvalidDecodingSet("decoding set of receiver " + std::to_string(i + 1) + " exceeds [n]");
    }
  }
}

}  // namespace

DeltaSpace DeltaSpace::full(const Problem& p) {
  DeltaSpace space(p.n(), DeltaStrategy::full);
  std::vector<std::vector<Mask>> choices;
  choices.reserve(static_cast<std::size_t>(p.n()));
  for (int i = 0; i < p.n(); ++i) choices.push_back(receiver_choices(p, i));
  std::vector<std::size_t> idx(static_cast<std::size_t>(p.n()), 0);
  while (true) {
    for (int i = 0; i < p.n(); ++i) space.flat_.push_back(choices[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]]);
    int pos = p.n() - 1;
    while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == choices[static_cast<std::size_t>(pos)].size()) {
      idx[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return space;
}

DeltaSpace DeltaSpace::minimal_and_maximal(const Problem& p) {
  DeltaSpace space(p.n(), DeltaStrategy::minimal_and_maximal);
  std::vector<std::vector<Mask>> choices;
  for (int i = 0; i < p.n(); ++i) {
    Mask lone = Mask{1} << i;
    Mask max = p.all_messages() & ~p.side_info(i);
    if (lone == max) {
      choices.push_back({lone});
    } else {
      choices.push_back({lone, max});
    }
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(p.n()), 0);
  while (true) {
    for (int i = 0; i < p.n(); ++i) space.flat_.push_back(choices[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]]);
    int pos = p.n() - 1;
    while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == choices[static_cast<std::size_t>(pos)].size()) {
      idx[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return space;
}

DeltaSpace DeltaSpace::custom(const Problem& p, const std::vector<DecodingTuple>& tuples) {
  DeltaSpace space(p.n(), DeltaStrategy::custom);
  std::set<std::vector<Mask>> seen;
  for (const DecodingTuple& t : tuples) {
    check_tuple(p, t);
    if (!seen.insert(t.sets).second) continue;  // drop duplicates, keep first
    space.flat_.insert(space.flat_.end(), t.sets.begin(), t.sets.end());
  }
  if (space.flat_.empty()) throw InvalidDecodingSet("custom decoding space is empty");
  return space;
}

std::uint64_t DeltaSpace::full_size(const Problem& p) {
  std::uint64_t total = 1;
  for (int i = 0; i < p.n(); ++i) {
    int optional = p.n() - 1 - popcount(p.side_info(i));
    total *= std::uint64_t{1} << optional;
  }
  return total;
}

DeltaSpace decoding_space(const Problem& p, DeltaStrategy strategy, const std::vector<DecodingTuple>& custom_tuples) {
  switch (strategy) {
    case DeltaStrategy::full: return DeltaSpace::full(p);
    case DeltaStrategy::minimal_and_maximal: return DeltaSpace::minimal_and_maximal(p);
    case DeltaStrategy::custom: return DeltaSpace::custom(p, custom_tuples);
  }
  throw std::invalid_argument("decoding_space: bad strategy");
}

}  // namespace dicap
