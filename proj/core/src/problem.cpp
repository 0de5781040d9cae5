#include "dicap/problem.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace dicap {

Problem::Problem(int n, std::vector<Mask> side_info) : n_(n), all_(0), side_info_(std::move(side_info)) {
  if (n_ < 1 || n_ > 30) throw std::invalid_argument("Problem: n must be in [1, 30]");
  if (side_info_.size() != static_cast<std::size_t>(n_)) {
    throw std::invalid_argument("Problem: side_info size != n");
  }
  all_ = full_mask(n_);
  for (int i = 0; i < n_; ++i) {
    Mask a = side_info_[static_cast<std::size_t>(i)];
    if (a & (Mask{1} << i)) throw SelfSideInformation("receiver " + std::to_string(i + 1) + " holds its own message");
    if (a & ~all_) throw IndexOutOfRange("side information of receiver " + std::to_string(i + 1) + " exceeds [n]");
  }
}

Problem Problem::parse(std::string_view text) {
  std::string s;
  s.reserve(text.size());
  for (char c : text) {
    if (c != ' ' && c != '\t') s.push_back(c);
  }
  std::vector<Mask> sets;
  std::size_t pos = 0;
  int expected = 1;
  while (pos < s.size()) {
    if (s[pos] != '(') throw MalformedClause("expected '(' at position " + std::to_string(pos));
    std::size_t close = s.find(')', pos);
    if (close == std::string::npos) throw MalformedClause("unterminated clause");
    std::string clause = s.substr(pos + 1, close - pos - 1);
    std::size_t bar = clause.find('|');
    if (bar == std::string::npos) throw MalformedClause("clause without '|': (" + clause + ")");
    std::string head = clause.substr(0, bar);
    std::string tail = clause.substr(bar + 1);
    if (head.empty() || head.find_first_not_of("0123456789") != std::string::npos) {
      throw MalformedClause("bad receiver index: " + head);
    }
    if (std::stoi(head) != expected) {
      throw MalformedClause("receiver indices must be 1.." + std::to_string(expected) + " in order, got " + head);
    }
    Mask a = 0;
    if (tail != "-") {
      if (tail.empty()) throw MalformedClause("empty side-information list (use '-')");
      std::size_t p = 0;
      while (p <= tail.size()) {
        std::size_t comma = tail.find(',', p);
        std::string item = tail.substr(p, comma == std::string::npos ? std::string::npos : comma - p);
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
          throw MalformedClause("bad side-information entry: '" + item + "'");
        }
        long idx = std::stol(item);
        if (idx < 1 || idx > 30) throw IndexOutOfRange("side-information index out of range: " + item);
        Mask bit = Mask{1} << (idx - 1);
        if (a & bit) throw MalformedClause("duplicate side-information entry: " + item);
        a |= bit;
        if (comma == std::string::npos) break;
        p = comma + 1;
      }
    }
    sets.push_back(a);
    ++expected;
    pos = close + 1;
    if (pos < s.size()) {
      if (s[pos] != ',') throw MalformedClause("expected ',' between clauses");
      ++pos;
      if (pos == s.size()) throw MalformedClause("trailing ','");
    }
  }
  if (sets.empty()) throw MalformedClause("no clauses");
  int n = static_cast<int>(sets.size());
  for (Mask a : sets) {
    if (a & ~full_mask(n)) throw IndexOutOfRange("side-information index exceeds n=" + std::to_string(n));
  }
  return Problem(n, std::move(sets));
}

std::string Problem::render() const {
  std::string out;
  for (int i = 0; i < n_; ++i) {
    if (i) out.push_back(',');
    out.push_back('(');
    out += std::to_string(i + 1);
    out.push_back('|');
    Mask a = side_info_[static_cast<std::size_t>(i)];
    if (a == 0) {
      out.push_back('-');
    } else {
      bool first = true;
      for_each_bit(a, [&](int j) {
        if (!first) out.push_back(',');
        first = false;
        out += std::to_string(j + 1);
      });
    }
    out.push_back(')');
  }
  return out;
}

Problem Problem::relabel(std::span<const int> perm) const {
  if (perm.size() != static_cast<std::size_t>(n_)) throw std::invalid_argument("relabel: bad permutation size");
  std::vector<Mask> out(static_cast<std::size_t>(n_), 0);
  for (int i = 0; i < n_; ++i) {
    Mask a = 0;
    for_each_bit(side_info_[static_cast<std::size_t>(i)], [&](int j) { a |= Mask{1} << perm[static_cast<std::size_t>(j)]; });
    out[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = a;
  }
  return Problem(n_, std::move(out));
}

Problem Problem::canonical() const {
  std::vector<int> perm(static_cast<std::size_t>(n_));
  std::iota(perm.begin(), perm.end(), 0);
  Problem best = relabel(perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    Problem candidate = relabel(perm);
    if (candidate < best) best = candidate;
  }
  return best;
}

std::vector<Problem> enumerate_nonisomorphic(int n) {
  if (n < 1) throw std::invalid_argument("enumerate_nonisomorphic: n must be >= 1");
  if (n > 6) throw std::invalid_argument("enumerate_nonisomorphic: n > 6 not supported at desk scale");
  std::set<Problem> classes;
  // Each receiver independently picks A_i among subsets of [n] \ {i}.
  std::vector<Mask> sets(static_cast<std::size_t>(n), 0);
  std::uint64_t per = std::uint64_t{1} << (n - 1);
  std::uint64_t count = 1;
  for (int i = 0; i < n; ++i) count *= per;
  for (std::uint64_t code = 0; code < count; ++code) {
    std::uint64_t c = code;
    for (int i = 0; i < n; ++i) {
      Mask choice = static_cast<Mask>(c % per);
      c /= per;
      // Spread the n-1 choice bits over positions != i.
      Mask a = (choice & (full_mask(i))) | ((choice & ~full_mask(i)) << 1);
      sets[static_cast<std::size_t>(i)] = a;
    }
    classes.insert(Problem(n, sets).canonical());
  }
  return {classes.begin(), classes.end()};
}

CapacityProfile::CapacityProfile(int n, std::vector<Rational> caps) : n_(n), caps_(std::move(caps)) {
  if (n_ < 1 || n_ > 30) throw std::invalid_argument("CapacityProfile: bad n");
  if (caps_.size() != (std::size_t{1} << n_) - 1) {
    throw std::invalid_argument("CapacityProfile: expected 2^n - 1 entries");
  }
  for (const Rational& c : caps_) {
    if (c < Rational(0)) throw std::invalid_argument("CapacityProfile: negative capacity");
  }
}

CapacityProfile CapacityProfile::uniform(int n, const Rational& c) {
  return CapacityProfile(n, std::vector<Rational>((std::size_t{1} << n) - 1, c));
}

CapacityProfile CapacityProfile::centralized(int n, const Rational& c) {
  std::vector<Rational> caps((std::size_t{1} << n) - 1, Rational(0));
  caps.back() = c;
  return CapacityProfile(n, std::move(caps));
}

const Rational& CapacityProfile::at(Mask j) const {
  if (j == 0 || j > full_mask(n_)) throw std::out_of_range("CapacityProfile::at: bad server mask");
  return caps_[j - 1];
}

Rational CapacityProfile::total() const {
  Rational t(0);
  for (const Rational& c : caps_) t += c;
  return t;
}

CapacityProfile CapacityProfile::scaled(const Rational& factor) const {
  std::vector<Rational> caps(caps_.size());
  for (std::size_t i = 0; i < caps_.size(); ++i) caps[i] = caps_[i] * factor;
  return CapacityProfile(n_, std::move(caps));
}

CapacityProfile uniform_capacities(int n, const Rational& c) { return CapacityProfile::uniform(n, c); }

}  // namespace dicap
