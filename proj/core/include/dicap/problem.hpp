// Instances of the distributed index coding problem: n messages, one
// receiver per message, receiver i holding side information A_i, and one
// server per nonempty message subset J with link capacity C_J.
#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dicap/bits.hpp"
#include "dicap/rational.hpp"

namespace dicap {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Clause is not of the form "(i|a,b,...)" with the expected index.
struct MalformedClause : ParseError {
  using ParseError::ParseError;
};
// Receiver listed its own message as side information.
struct SelfSideInformation : ParseError {
  using ParseError::ParseError;
};
struct IndexOutOfRange : ParseError {
  using ParseError::ParseError;
};

class Problem {
 public:
  // side_info[i] = A_i as a bitmask over messages 0..n-1.
  Problem(int n, std::vector<Mask> side_info);

  // Text format: clauses "(i|a,b,...)" joined by ",", 1-based ascending
  // indices, "-" for an empty set; whitespace is ignored.
  static Problem parse(std::string_view text);
  std::string render() const;

  int n() const { return n_; }
  Mask side_info(int i) const { return side_info_[static_cast<std::size_t>(i)]; }
  const std::vector<Mask>& side_info() const { return side_info_; }
  // B_i: messages receiver i neither wants nor knows.
  Mask interfering(int i) const { return all_ & ~(side_info_[static_cast<std::size_t>(i)] | (Mask{1} << i)); }
  Mask all_messages() const { return all_; }

  // Applies the relabeling perm: message i becomes perm[i].
  Problem relabel(std::span<const int> perm) const;
  // Lexicographically least relabeling over all n! permutations. Two
  // problems are isomorphic iff their canonical forms compare equal.
  Problem canonical() const;

  friend bool operator==(const Problem& a, const Problem& b) {
    return a.n_ == b.n_ && a.side_info_ == b.side_info_;
  }
  friend bool operator<(const Problem& a, const Problem& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    return a.side_info_ < b.side_info_;
  }

 private:
  int n_;
  Mask all_;
  std::vector<Mask> side_info_;
};

// One representative (the canonical form) per isomorphism class over all
// prod_i 2^(n-1) instances, sorted. n=4 yields 218 classes.
std::vector<Problem> enumerate_nonisomorphic(int n);

// Link capacities C_J for every nonempty J, stored exactly.
class CapacityProfile {
 public:
  // caps[J-1] = C_J; requires 2^n - 1 entries, all >= 0.
  CapacityProfile(int n, std::vector<Rational> caps);
  static CapacityProfile uniform(int n, const Rational& c);
  // C_[n] = c, every other server zero.
  static CapacityProfile centralized(int n, const Rational& c);

  int n() const { return n_; }
  const Rational& at(Mask j) const;
  Rational total() const;
  CapacityProfile scaled(const Rational& factor) const;

  friend bool operator==(const CapacityProfile& a, const CapacityProfile& b) {
    return a.n_ == b.n_ && a.caps_ == b.caps_;
  }

 private:
  int n_;
  std::vector<Rational> caps_;
};

CapacityProfile uniform_capacities(int n, const Rational& c);

}  // namespace dicap
