// Exact rational arithmetic for capacity profiles and bound values.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace dicap {

// Normalized fraction with positive denominator. Values in this project are
// small (link capacities, sum-rate bounds), so 64-bit components suffice;
// overflow in intermediate products is checked and reported.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  // "21", "56/3", "-1/2"
  std::string str() const;

  Rational operator-() const { return Rational(-num_, den_); }
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

  // Parses "p", "p/q", or a plain decimal such as "23.5" (kept exact).
  static Rational parse(const std::string& text);

 private:
  std::int64_t num_;
  std::int64_t den_;
};

// Best rational approximation p/q with 1 <= q <= max_den, provided it lies
// within 1e-6 of v; otherwise empty.
std::optional<Rational> rationalize(double v, std::int64_t max_den = 64);

}  // namespace dicap
