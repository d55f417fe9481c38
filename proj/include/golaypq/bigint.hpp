#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <string>

namespace golaypq {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(const BigInt& v) { return v.convert_to<double>(); }

inline bool fits_int64(const BigInt& v) {
  return v >= BigInt(std::numeric_limits<std::int64_t>::min()) &&
         v <= BigInt(std::numeric_limits<std::int64_t>::max());
}

inline std::string to_string(const BigInt& v) { return v.str(); }

inline std::string to_string(const Rational& r) {
  if (denominator_of(r) == 1) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

// Exact decimal rounding, half away from zero.
inline std::string to_fixed(const Rational& r, unsigned digits) {
  BigInt scale = 1;
  for (unsigned i = 0; i < digits; ++i) scale *= 10;
  const bool negative = r < 0;
  const Rational a = negative ? Rational(-r) : r;
  const BigInt num = numerator_of(a) * scale * 2 + denominator_of(a);
  const BigInt scaled = num / (denominator_of(a) * 2);
  std::string s = BigInt(scaled / scale).str();
  if (digits > 0) {
    std::string frac = BigInt(scaled % scale).str();
    s += "." + std::string(digits - frac.size(), '0') + frac;
  }
  return (negative && scaled != 0 ? "-" : "") + s;
}

}  // namespace golaypq
