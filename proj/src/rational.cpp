// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tptnd/rational.h"

#include <charconv>
#include <limits>

#include "tptnd/error.h"

namespace tptnd {
namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t parse_digits(std::string_view digits, std::string_view whole) {
  if (digits.empty()) {
    throw Error(ErrorKind::SyntaxError,
                "malformed number '" + std::string(whole) + "'");
  }
  std::int64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec == std::errc::result_out_of_range) {
    throw Error(ErrorKind::Overflow,
                "number '" + std::string(whole) + "' is too large");
  }
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw Error(ErrorKind::SyntaxError,
                "malformed number '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorKind::DivisionByZero, "zero denominator");
  *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
  if (den == 0) throw Error(ErrorKind::DivisionByZero, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();
  if (num > kMax || num < -kMax || den > kMax) {
    throw Error(ErrorKind::Overflow, "rational out of 64-bit range");
  }
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational Rational::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t n = parse_digits(text.substr(0, slash), text);
    std::int64_t d = parse_digits(text.substr(slash + 1), text);
    if (d == 0) {
      throw Error(ErrorKind::DivisionByZero,
                  "zero denominator in '" + std::string(text) + "'");
    }
    return Rational(n, d);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 18) {
      throw Error(ErrorKind::SyntaxError,
                  "malformed decimal '" + std::string(text) + "'");
    }
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    std::int64_t w = whole.empty() ? 0 : parse_digits(whole, text);
    std::int64_t f = parse_digits(frac, text);
    return from_wide(static_cast<__int128>(w) * scale + f, scale);
  }
  return Rational(parse_digits(text, text));
}

double Rational::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

long double Rational::to_long_double() const {
  return static_cast<long double>(num_) / static_cast<long double>(den_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

bool Rational::is_probability() const { return num_ >= 0 && num_ <= den_; }

Rational Rational::operator-() const { return from_wide(-(__int128)num_, den_); }

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_wide((__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_,
                             (__int128)a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational::from_wide((__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_,
                             (__int128)a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw Error(ErrorKind::DivisionByZero, "division by zero");
  return Rational::from_wide((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  __int128 lhs = (__int128)a.num_ * b.den_;
  __int128 rhs = (__int128)b.num_ * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational abs(const Rational& r) { return r < Rational(0) ? -r : r; }

}  // namespace tptnd
