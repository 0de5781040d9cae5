#include "dicap/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

namespace dicap {

namespace {

std::int64_t checked(__int128 v, const char* what) {
  if (v > INT64_MAX || v < INT64_MIN) {
    throw std::overflow_error(std::string("Rational overflow in ") + what);
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  __int128 num = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
  __int128 den = static_cast<__int128>(a.den_) * b.den_;
  // Reduce in 128 bits before narrowing.
  __int128 x = num < 0 ? -num : num, y = den;
  while (y) {
    __int128 t = x % y;
    x = y;
    y = t;
  }
  if (x > 1) {
    num /= x;
    den /= x;
  }
  return Rational(checked(num, "add"), checked(den, "add"));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  Rational x(a.num_, b.den_);  // cross-reduce
  Rational y(b.num_, a.den_);
  __int128 num = static_cast<__int128>(x.num_) * y.num_;
  __int128 den = static_cast<__int128>(x.den_) * y.den_;
  return Rational(checked(num, "mul"), checked(den, "mul"));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::invalid_argument("Rational: division by zero");
  return a * Rational(b.den_, b.num_);
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

Rational Rational::parse(const std::string& text) {
  std::size_t slash = text.find('/');
  if (slash != std::string::npos) {
    std::int64_t p = std::stoll(text.substr(0, slash));
    std::int64_t q = std::stoll(text.substr(slash + 1));
    return Rational(p, q);
  }
  std::size_t dot = text.find('.');
  if (dot == std::string::npos) return Rational(std::stoll(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  std::int64_t den = 1;
  for (std::size_t i = dot + 1; i < text.size(); ++i) den = checked(static_cast<__int128>(den) * 10, "parse");
  return Rational(std::stoll(digits), den);
}

std::optional<Rational> rationalize(double v, std::int64_t max_den) {
  if (max_den < 1 || !std::isfinite(v)) return std::nullopt;
  constexpr double kTol = 1e-6;
  // Denominator range is tiny in practice; scan it for the true best
  // approximation (continued fractions would skip non-convergent ties).
  if (max_den <= 4096) {
    double best_err = kTol;
    std::optional<Rational> best;
    for (std::int64_t q = 1; q <= max_den; ++q) {
      double pf = std::nearbyint(v * static_cast<double>(q));
      if (std::fabs(pf) > 9.0e15) return std::nullopt;
      auto p = static_cast<std::int64_t>(pf);
      double err = std::fabs(v - static_cast<double>(p) / static_cast<double>(q));
      if (err <= best_err) {
        best_err = err;
        best = Rational(p, q);
        if (err == 0.0) break;
      }
    }
    return best;
  }
  // Continued-fraction convergents for large caps.
  double x = v;
  std::int64_t p0 = 1, q0 = 0, p1 = static_cast<std::int64_t>(std::floor(x)), q1 = 1;
  x -= std::floor(x);
  while (q1 <= max_den) {
    if (std::fabs(v - static_cast<double>(p1) / static_cast<double>(q1)) <= kTol) {
      return Rational(p1, q1);
    }
    if (x < 1e-15) break;
    x = 1.0 / x;
    double a = std::floor(x);
    if (a > 9.0e15) break;
    x -= a;
    std::int64_t p2 = checked(static_cast<__int128>(a) * p1 + p0, "rationalize");
    std::int64_t q2 = checked(static_cast<__int128>(a) * q1 + q0, "rationalize");
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  return std::nullopt;
}

}  // namespace dicap
