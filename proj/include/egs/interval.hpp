#pragma once

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <utility>

#include "egs/rational.hpp"

namespace egs {

// Closed interval [lo, hi] with exact rational endpoints.  All operations
// return enclosures; transcendental evaluations take a `bits` precision
// target (relative width about 2^-bits) and round outward.
struct RI {
  Rat lo, hi;

  RI() : lo(0), hi(0) {}
  explicit RI(const Rat& v) : lo(v), hi(v) {}
  RI(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) throw std::logic_error("interval endpoints out of order");
  }
  static RI point(const Rat& v) { return RI(v); }

  Rat width() const { return hi - lo; }
  Rat mid() const { return (lo + hi) / 2; }
  bool contains(const Rat& v) const { return lo <= v && v <= hi; }
  bool contains(const RI& o) const { return lo <= o.lo && o.hi <= hi; }
  bool intersects(const RI& o) const { return lo <= o.hi && o.lo <= hi; }

  // Definitely-above / definitely-below comparisons.
  bool gt(const Rat& v) const { return lo > v; }
  bool ge(const Rat& v) const { return lo >= v; }
  bool lt(const Rat& v) const { return hi < v; }
  bool le(const Rat& v) const { return hi <= v; }

  RI operator-() const { return RI(-hi, -lo); }

  RI compressed(long bits) const {
    return RI(dyadic_round_down(lo, bits), dyadic_round_up(hi, bits));
  }
};

inline RI operator+(const RI& a, const RI& b) { return RI(a.lo + b.lo, a.hi + b.hi); }
inline RI operator-(const RI& a, const RI& b) { return RI(a.lo - b.hi, a.hi - b.lo); }
inline RI operator+(const RI& a, const Rat& b) { return RI(a.lo + b, a.hi + b); }
inline RI operator-(const RI& a, const Rat& b) { return RI(a.lo - b, a.hi - b); }

inline RI operator*(const RI& a, const RI& b) {
  Rat p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return RI(std::min(std::min(p1, p2), std::min(p3, p4)),
            std::max(std::max(p1, p2), std::max(p3, p4)));
}

inline RI operator*(const RI& a, const Rat& c) {
  if (c >= 0) return RI(a.lo * c, a.hi * c);
  return RI(a.hi * c, a.lo * c);
}
inline RI operator*(const Rat& c, const RI& a) { return a * c; }

inline RI inv(const RI& a) {
  if (a.lo <= 0 && a.hi >= 0) throw std::domain_error("interval inverse through zero");
  return RI(1 / a.hi, 1 / a.lo);
}
inline RI operator/(const RI& a, const RI& b) { return a * inv(b); }
inline RI operator/(const RI& a, const Rat& c) {
  if (c == 0) throw std::domain_error("interval divide by zero");
  if (c > 0) return RI(a.lo / c, a.hi / c);
  return RI(a.hi / c, a.lo / c);
}

inline RI hull(const RI& a, const RI& b) {
  return RI(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}
inline RI max_ri(const RI& a, const RI& b) {
  return RI(std::max(a.lo, b.lo), std::max(a.hi, b.hi));
}
inline RI min_ri(const RI& a, const RI& b) {
  return RI(std::min(a.lo, b.lo), std::min(a.hi, b.hi));
}
// max(x, 0) componentwise
inline RI pos_part(const RI& a) {
  return RI(std::max(a.lo, Rat(0)), std::max(a.hi, Rat(0)));
}
inline RI abs_ri(const RI& a) {
  if (a.lo >= 0) return a;
  if (a.hi <= 0) return -a;
  return RI(Rat(0), std::max(Rat(-a.lo), a.hi));
}

namespace detail {

// atanh(z) for |z| < 1/2, exact partial sums, geometric tail bound
// z^(2n+3)/((2n+3)(1-z^2)) added outward.  Monotone increasing in z.
inline RI atanh_exact(const Rat& z, long bits) {
  Rat az = z < 0 ? Rat(-z) : z;
  if (az >= Rat(1, 2)) throw std::logic_error("atanh argument out of range");
  if (az == 0) return RI(Rat(0));
  Rat z2 = az * az;
  Rat pow = az, sum = az;  // i = 0 term
  Rat target(Int(1), Int(1) << (bits + 4));
  for (long i = 1;; ++i) {
    pow *= z2;
    Rat t = pow / (2 * i + 1);
    sum += t;
    Rat tail = pow * z2 / ((2 * i + 3) * (1 - z2));
    if (tail < target) {
      RI r = (z >= 0) ? RI(sum, sum + tail) : RI(-(sum + tail), -sum);
      return r;
    }
    if (i > 8 * bits) throw std::logic_error("atanh series failed to converge");
  }
}

// arctan(1/x) for integer x >= 2, alternating series, first-omitted-term tail.
inline RI atan_inv_int(long x, long bits) {
  Rat term(1, x);
  Rat x2 = Rat(Int(x) * x);
  Rat sum(0);
  Rat target(Int(1), Int(1) << (bits + 4));
  for (long i = 0;; ++i) {
    Rat t = term / (2 * i + 1);
    if (t < target) {
      if (i % 2 == 0) return RI(sum, sum + t);
      return RI(sum - t, sum);
    }
    sum += (i % 2 == 0) ? t : Rat(-t);
    term /= x2;
  }
}

// exp(v) for |v| < 2/5, exact partial sums; remainder bounded by
// |v|^(n+1)/(n+1)! * 1/(1-|v|) in both directions.
inline RI exp_small_exact(const Rat& v, long bits) {
  if (v == 0) return RI(Rat(1));
  Rat av = v < 0 ? Rat(-v) : v;
  if (av >= Rat(2, 5)) throw std::logic_error("exp_small argument out of range");
  Rat term(1), sum(1), aterm(1);
  Rat target(Int(1), Int(1) << (bits + 4));
  for (long i = 1;; ++i) {
    term = term * v / i;
    aterm = aterm * av / i;
    sum += term;
    Rat tail = aterm * av / (i + 1) / (1 - av);
    if (tail < target) return RI(sum - tail, sum + tail);
    if (i > 8 * bits) throw std::logic_error("exp series failed to converge");
  }
}

}  // namespace detail

// log 2, pi, e cached at high precision (320 bits).
inline const RI& log2_ri() {
  static const RI v = detail::atanh_exact(Rat(1, 3), 320) * Rat(2);
  return v;
}

inline const RI& pi_ri() {
  static const RI v =
      detail::atan_inv_int(5, 320) * Rat(16) - detail::atan_inv_int(239, 320) * Rat(4);
  return v;
}

inline const RI& e_ri() {
  static const RI v = [] {
    // e = sum 1/k!, tail after the k=130 term is < 2/131!
    Rat sum(0), term(1);
    for (long k = 0; k <= 130; ++k) {
      sum += term;
      term /= (k + 1);
    }
    return RI(sum, sum + 2 * term);
  }();
  return v;
}

// Enclosure of log(q) for exact rational q > 0.
inline RI log_ri(const Rat& q, long bits = 96) {
  if (q <= 0) throw std::domain_error("log of non-positive rational");
  if (q == 1) return RI(Rat(0));
  long s = rat_exponent(q);
  Rat m = (s >= 0) ? Rat(num(q), den(q) << s) : Rat(num(q) << (-s), den(q));
  while (m >= Rat(4, 3)) { m /= 2; ++s; }
  while (m < Rat(2, 3)) { m *= 2; --s; }
  // |z| <= 1/5
  Rat z = (m - 1) / (m + 1);
  RI at;
  if (bit_length(den(z)) > bits + 40) {
    // compress the argument; atanh is increasing
    Rat zl = dyadic_round_down(z, bits + 24), zu = dyadic_round_up(z, bits + 24);
    at = RI(detail::atanh_exact(zl, bits).lo, detail::atanh_exact(zu, bits).hi);
  } else {
    at = detail::atanh_exact(z, bits);
  }
  RI res = at * Rat(2) + log2_ri() * Rat(s);
  return res.compressed(bits + 8);
}

// Enclosure of log of an interval (requires lo > 0).
inline RI log_ri(const RI& x, long bits = 96) {
  if (x.lo <= 0) throw std::domain_error("log of interval touching zero");
  if (x.lo == x.hi) return log_ri(x.lo, bits);
  return RI(log_ri(x.lo, bits).lo, log_ri(x.hi, bits).hi);
}

inline RI log_int(const Int& n, long bits = 96) { return log_ri(Rat(n), bits); }

// Enclosure of exp(x) for rational x.
inline RI exp_ri(const Rat& x, long bits = 96) {
  if (x == 0) return RI(Rat(1));
  const RI& l2 = log2_ri();
  Int k = floor_rat(x / l2.mid() + Rat(1, 2));
  RI r = RI(x) - l2 * Rat(k);  // |r| <= log2/2 + eps < 2/5
  Rat rl = dyadic_round_down(r.lo, bits + 24), ru = dyadic_round_up(r.hi, bits + 24);
  RI er(detail::exp_small_exact(rl, bits).lo, detail::exp_small_exact(ru, bits).hi);
  if (er.lo < 0) er.lo = 0;
  RI res;
  if (k >= 0) {
    Int p = Int(1) << static_cast<unsigned long>(to_u64(k));
    res = er * Rat(p);
  } else {
    Int p = Int(1) << static_cast<unsigned long>(to_u64(-k));
    res = er / Rat(p);
  }
  return res.compressed(bits + 8);
}

inline RI exp_ri(const RI& x, long bits = 96) {
  if (x.lo == x.hi) return exp_ri(x.lo, bits);
  return RI(exp_ri(x.lo, bits).lo, exp_ri(x.hi, bits).hi);
}

// Enclosure of sqrt(q), q >= 0.
inline RI sqrt_ri(const Rat& q, long bits = 96) {
  if (q < 0) throw std::domain_error("sqrt of negative rational");
  if (q == 0) return RI(Rat(0));
  long k = bits / 2 + 8 - rat_exponent(q) / 2;
  if (k < 0) k = 0;
  Int scaled = (num(q) << (2 * static_cast<unsigned long>(k))) / den(q);
  Int root = sqrt(scaled);  // floor sqrt of floor-scaled value
  Rat lo(root, Int(1) << static_cast<unsigned long>(k));
  Rat hi(root + 2, Int(1) << static_cast<unsigned long>(k));
  return RI(lo, hi);
}

inline RI sqrt_ri(const RI& x, long bits = 96) {
  if (x.lo == x.hi) return sqrt_ri(x.lo, bits);
  return RI(sqrt_ri(x.lo, bits).lo, sqrt_ri(x.hi, bits).hi);
}

// Sum accumulator that compresses periodically to keep denominators small.
struct RISum {
  RI total;
  long bits;
  int pending = 0;
  explicit RISum(long b = 96) : total(Rat(0)), bits(b) {}
  void add(const RI& x) {
    total = total + x;
    if (++pending >= 16) {
      total = total.compressed(bits + 16);
      pending = 0;
    }
  }
  RI value() const { return total.compressed(bits + 16); }
};

}  // namespace egs
