#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace egs {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

inline Int num(const Rat& q) { return numerator(q); }
inline Int den(const Rat& q) { return denominator(q); }

inline Rat make_rat(const Int& n, const Int& d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  return Rat(n, d);
}

// floor(a/b) for integers, b > 0
inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

inline Int ceil_div(const Int& a, const Int& b) { return -floor_div(-a, b); }

inline Int floor_rat(const Rat& q) { return floor_div(num(q), den(q)); }
inline Int ceil_rat(const Rat& q) { return -floor_rat(-q); }

inline std::int64_t to_i64(const Int& x) { return static_cast<std::int64_t>(x); }
inline std::uint64_t to_u64(const Int& x) { return static_cast<std::uint64_t>(x); }

// Number of bits of |x|; 0 for x == 0.
inline long bit_length(const Int& x) {
  if (x == 0) return 0;
  return static_cast<long>(mpz_sizeinbase(x.backend().data(), 2));
}

// Rough binary exponent of |q|: bitlen(num) - bitlen(den).
inline long rat_exponent(const Rat& q) {
  if (q == 0) return 0;
  return bit_length(num(q)) - bit_length(den(q));
}

// Dyadic rounding: largest multiple of 2^-k that is <= q (round_down) or the
// smallest >= q (round_up), with k chosen so the absolute error is below
// 2^(exponent(q) - bits).  Keeps denominators as powers of two, which makes
// long accumulations cheap while staying exact and outward-safe.
inline Rat dyadic_round_down(const Rat& q, long bits) {
  if (q == 0) return q;
  long k = bits - rat_exponent(q);
  if (k < 0) k = 0;
  if (bit_length(den(q)) <= bits + 2) return q;  // already small
  Int scaled = floor_div(num(q) << k, den(q));
  return Rat(scaled, Int(1) << k);
}

inline Rat dyadic_round_up(const Rat& q, long bits) { return -dyadic_round_down(-q, bits); }

inline std::string rat_to_string(const Rat& q) {
  std::string s = num(q).str();
  if (den(q) != 1) s += "/" + den(q).str();
  return s;
}

inline Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(Int(s));
  Int n(s.substr(0, slash)), d(s.substr(slash + 1));
  if (d <= 0) throw std::invalid_argument("bad rational literal: " + s);
  return Rat(n, d);
}

// Decimal rendering (round toward zero) with the given number of fractional
// digits, for human-readable reports.  Never used for verification decisions.
inline std::string rat_to_decimal(const Rat& q, int digits) {
  Int p10 = 1;
  for (int i = 0; i < digits; ++i) p10 *= 10;
  Int scaled = num(q) * p10 / den(q);
  bool neg = scaled < 0;
  if (neg) scaled = -scaled;
  std::string ds = scaled.str();
  while ((int)ds.size() <= digits) ds.insert(ds.begin(), '0');
  std::string out = ds.substr(0, ds.size() - digits) + "." + ds.substr(ds.size() - digits);
  return neg ? "-" + out : out;
}

}  // namespace egs
