#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "ncfair/error.hpp"

namespace ncfair {

/// Exact rational arithmetic for the verification harness. Counts and
/// counts-of-counts at harness scale stay far below 2^63 after
/// normalization; intermediate products go through __int128.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw Error("rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  static Rational from_i128(__int128 n, __int128 d) {
    if (d == 0) throw Error("rational: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    const __int128 lim = static_cast<__int128>(INT64_MAX);
    if (n > lim || n < -lim || d > lim) throw Error("rational: overflow");
    return Rational{static_cast<long long>(n), static_cast<long long>(d), 0};
  }

  Rational operator+(const Rational& o) const {
    return from_i128(static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den,
                     static_cast<__int128>(den) * o.den);
  }
  Rational operator-(const Rational& o) const {
    return from_i128(static_cast<__int128>(num) * o.den - static_cast<__int128>(o.num) * den,
                     static_cast<__int128>(den) * o.den);
  }
  Rational operator*(const Rational& o) const {
    return from_i128(static_cast<__int128>(num) * o.num, static_cast<__int128>(den) * o.den);
  }
  Rational operator/(const Rational& o) const {
    if (o.num == 0) throw Error("rational: division by zero");
    return from_i128(static_cast<__int128>(num) * o.den, static_cast<__int128>(den) * o.num);
  }
  Rational operator-() const { return Rational{-num, den, 0}; }

  Rational abs() const { return num < 0 ? -*this : *this; }

  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const {
    return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
  }
  bool operator<=(const Rational& o) const { return *this < o || *this == o; }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string to_string() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }

private:
  // already-normalized constructor
  Rational(long long n, long long d, int) : num(n), den(d) {}
};

}  // namespace ncfair
