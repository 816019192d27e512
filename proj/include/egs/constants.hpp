#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "egs/interval.hpp"

namespace egs {

using u64 = std::uint64_t;

struct ConstantEnclosure {
  std::string name;
  RI value;
  std::vector<std::pair<std::string, RI>> components;
};

namespace cdetail {

// Antiderivative helpers for segments of the c0 / c1' integrals.
// All take enclosures of log y and 1/y at the evaluation point.

// integral of {y} log(C/ (y/e)) / y^2 over a segment where floor(y) = n and
// ceil(y/e) = k are constant, C = k e:
//   G0(y) = logC*log y - log^2(y)/2 + n*(logC*(1) ... ) assembled by caller
inline RI seg_primitive_c0(const RI& logC, const RI& logy, const RI& inv_y, const Rat& n) {
  // int (y-n)(logC - log y)/y^2 dy
  //   = logC log y - log^2 y / 2 + n (logC + 1 + log y... ) precisely:
  //   int (logC - logy)/y dy      = logC logy - log^2(y)/2
  //   int (logC - logy)/y^2 dy    = -logC/y + (logy + 1)/y
  // full primitive: first - n * second
  RI first = logC * logy - logy * logy / Rat(2);
  RI second = (logy + Rat(1) - logC) * inv_y;
  return first - second * n;
}

// int (y-n)(log y)(logC - log y)/y^2 dy with the same segment constants:
//   int (logC logy - log^2 y)/y dy   = logC log^2 y/2 - log^3 y/3
//   int (logC logy - log^2 y)/y^2 dy = -logC (logy+1)/y + (log^2 y + 2logy + 2)/y
inline RI seg_primitive_c1(const RI& logC, const RI& logy, const RI& inv_y, const Rat& n) {
  RI l2 = logy * logy;
  RI first = logC * l2 / Rat(2) - l2 * logy / Rat(3);
  RI second = (l2 + logy * Rat(2) + Rat(2) - logC * (logy + Rat(1))) * inv_y;
  return first - second * n;
}

struct FractionalIntegrals {
  RI c0_part;   // int_e^inf {y} log(ceil(y/e)/(y/e)) dy/y^2
  RI c1_part;   // same with an extra log y factor
};

// Shared segment walk: breakpoints at integers n and at multiples k*e of e,
// up to y = T (integer); tails are in [0, 1/(2T^2)] and [0, (2logT+1)/(4T^2)].
inline FractionalIntegrals fractional_integrals(u64 T, long bits) {
  const RI& e = e_ri();
  RISum s0(bits), s1(bits);
  // walk segments: current position y0 (interval), next breakpoint = min of
  // next integer and next multiple of e
  u64 n = 2;       // floor(y) on the current segment, starting just above e
  u64 k = 1;       // ceil(y/e) on segment (y in (k-1)e, ke] has ceil = k); y>e so k>=2
  // exact start at y = e: n = floor(e) = 2, and for y slightly above e,
  // ceil(y/e) = 2
  k = 2;
  RI y_prev = e;
  RI logy_prev = RI(Rat(1));
  RI inv_prev = inv(e);
  auto log_cached = [&](u64 v) { return log_ri(Rat(v), bits); };
  while (n < T) {
    // next breakpoint: integer n+1 or k*e, whichever is smaller
    RI ke = e * Rat(k);
    bool ke_next = ke.hi < Rat(n + 1);
    if (!(ke.hi < Rat(n + 1)) && !(ke.lo > Rat(n + 1)))
      throw std::logic_error("breakpoint tie between integer and e-multiple");
    RI y_next = ke_next ? ke : RI(Rat(n + 1));
    RI logy_next = ke_next ? log_cached(k) + Rat(1) : log_cached(n + 1);
    RI inv_next = ke_next ? inv(ke) : RI(Rat(1, n + 1));
    // segment (y_prev, y_next): floor = n, ceil(y/e) = k, C = k e
    RI logC = log_cached(k) + Rat(1);
    Rat nn(n);
    s0.add(seg_primitive_c0(logC, logy_next, inv_next, nn) -
           seg_primitive_c0(logC, logy_prev, inv_prev, nn));
    s1.add(seg_primitive_c1(logC, logy_next, inv_next, nn) -
           seg_primitive_c1(logC, logy_prev, inv_prev, nn));
    if (ke_next) ++k;
    else ++n;
    y_prev = y_next;
    logy_prev = logy_next;
    inv_prev = inv_next;
  }
  FractionalIntegrals out;
  RI tail0(Rat(0), Rat(1, 2 * Int(T) * Int(T)));
  RI logT = log_cached(T);
  RI tail1(Rat(0), ((logT * Rat(2) + Rat(1)) / Rat(4 * Int(T) * Int(T))).hi);
  out.c0_part = s0.value() + tail0;
  out.c1_part = s1.value() + tail1;
  return out;
}

}  // namespace cdetail

// c0 = (1/e) int_0^1 f_e = 0.30441901..., via the three-part decomposition:
// series (1/2e) sum log^2(1+1/k), closed term 2/e^2 - log2/(2e), minus the
// fractional-part integral.
inline ConstantEnclosure compute_c0(const Rat& tol = Rat(1, Int("10000000000"))) {
  if (tol < Rat(1, Int("10000000000"))) throw std::domain_error("c0 tolerance floor is 1e-10");
  const long bits = 80;
  const RI& e = e_ri();
  ConstantEnclosure out;
  out.name = "c0";

  // series part: adaptive T so the integral-test tail width fits the budget
  u64 T = 1000;
  while (Rat(12, Int(T) * Int(T)) > tol) T *= 2;
  RISum series(bits);
  for (u64 k = 1; k <= T; ++k) {
    RI l = log_ri(Rat(k + 1, k), 56);
    series.add(l * l);
  }
  // tail of sum log^2(1+1/k): between 1/(T+2) and 1/T by the integral test
  RI tail(Rat(1, Int(T) + 2), Rat(1, Int(T)));
  RI series_part = (series.value() + tail) / (e * Rat(2));

  RI closed_part = RI(Rat(2)) / (e * e) - log2_ri() / (e * Rat(2));

  u64 Ti = 2000;
  while (Rat(2, Int(Ti) * Int(Ti)) > tol) Ti *= 2;
  auto frac = cdetail::fractional_integrals(Ti, bits);
  RI integral_part = frac.c0_part / e;

  out.components = {{"series", series_part}, {"closed", closed_part}, {"integral", integral_part}};
  out.value = (series_part + closed_part - integral_part).compressed(bits);
  return out;
}

struct C1Suite {
  ConstantEnclosure c1_prime;         // (1/e) int f_e(x) log(1/x) dx
  ConstantEnclosure c1_double_prime;  // sum (1/k) log((e/k) ceil(k/e))
  ConstantEnclosure c1;               // c1' + c0 c1'' - e c0^2 / 2
  std::string adjudication;
};

inline ConstantEnclosure compute_c1_prime(const Rat& tol = Rat(1, Int("100000000"))) {
  const long bits = 80;
  const RI& e = e_ri();
  ConstantEnclosure out;
  out.name = "c1'";
  u64 T = 2000;
  while (Rat(20, Int(T) * Int(T)) > tol) T *= 2;
  RISum series(bits);
  RI lk1(Rat(0));  // log(k+1), advanced incrementally
  for (u64 k = 1; k <= T; ++k) {
    RI l = log_ri(Rat(k + 1, k), 56);
    lk1 = (lk1 + l).compressed(72);
    series.add((lk1 + Rat(1)) * l * l / Rat(2) - l * l * l / Rat(3));
  }
  // tail: sum_{k>T} (1+log(k+1)) log^2(1+1/k)/2 - log^3(1+1/k)/3, bounded via
  // the integral test on (1+log(x+1))/x^2 and the cubic remainder
  RI logT1 = log_ri(Rat(T + 1), bits);
  RI logT2 = log_ri(Rat(T + 2), bits);
  Rat hi = ((RI(Rat(1, Int(T))) + logT1 / Rat(Int(T)) + log_ri(Rat(T + 1, T), bits)) / Rat(2)).hi;
  Rat lo = ((logT2 + Rat(2)) / Rat(2 * (Int(T) + 2))).lo - Rat(1, 6 * Int(T) * Int(T));
  if (lo < 0) lo = 0;
  RI series_all = (series.value() + RI(lo, hi)) / e;

  RI closed = RI(Rat(6)) / (e * e) -
              (log2_ri() * log2_ri() + log2_ri() + Rat(3)) / (e * Rat(2));

  u64 Ti = 4000;
  while (Rat(40, Int(Ti) * Int(Ti)) > tol) Ti *= 2;
  auto frac = cdetail::fractional_integrals(Ti, bits);
  RI integral_part = frac.c1_part / e;

  out.components = {{"series", series_all}, {"closed", closed}, {"integral", integral_part}};
  out.value = (series_all + closed - integral_part).compressed(bits);
  return out;
}

inline ConstantEnclosure compute_c1_double_prime(bool accelerate, u64 K, u64 Nfreq) {
  const long bits = 72;
  const RI& e = e_ri();
  ConstantEnclosure out;
  out.name = "c1''";
  RISum main(bits);
  // incremental logs: log k and log c advance by log(k/(k-1)) steps whose
  // atanh arguments are ~1/(2k), so each step costs a couple of terms
  RI log_k(Rat(0));
  RI log_c(Rat(0));
  Int c_cur = 1;
  const RI inv_e_hi = inv(e).compressed(120);
  for (u64 k = 1; k <= K; ++k) {
    if (k > 1) log_k = (log_k + log_ri(Rat(k, k - 1), 60)).compressed(76);
    // ceil(k/e); never an integer boundary since e is irrational
    RI ke = inv_e_hi * Rat(k);
    Int c = ceil_rat(ke.lo);
    if (ceil_rat(ke.hi) != c) throw std::logic_error("e precision insufficient for ceil(k/e)");
    while (c_cur < c) {
      ++c_cur;
      log_c = (log_c + log_ri(Rat(c_cur, c_cur - 1), 60)).compressed(76);
    }
    // (1/k) log((e/k) c) = (1/k)(1 + log c - log k)
    RI term = (log_c - log_k + Rat(1)) / Rat(k);
    main.add(term);
  }
  RI value = main.value();
  if (!accelerate) {
    RI crude(Rat(0), (e / Rat(Int(K))).hi);  // tail in [0, e/K]
    value = value + crude;
    out.components = {{"partial-sum", main.value()}, {"crude-tail", crude}};
  } else {
    // tail = sum_{k>K} (1/k) log(1 + e{-k/e}/k); sandwich by Taylor:
    //   e{-k/e}/k^2 - e^2/(2k^3) <= term <= e{-k/e}/k^2
    // main tail piece (e/2) sum 1/k^2 plus the equidistribution error via
    // the Erdos-Turan inequality with |S_{n,K}| <= 1/((K+1)^2 sin(pi n/e)).
    RI inv_sq_tail(Rat(1, Int(K) + 1), Rat(1, Int(K)));  // sum_{k>K} 1/k^2
    RI half_main = e * inv_sq_tail / Rat(2);
    RI quad_term = RI(Rat(0), (e * e / Rat(4 * Int(K) * Int(K))).hi);
    // Erdos-Turan: (1/(N+1)) sum_k e/k^2 + sum_n (2e/(pi n) + 2e/(N+1)) |S
    RISum et(bits);
    et.add(e * inv_sq_tail / Rat(Int(Nfreq) + 1));
    const RI inv_e = inv(e).compressed(120);
    const RI e_c = e.compressed(80);
    const RI pi_c = pi_ri().compressed(80);
    Rat Ksq = Rat((Int(K) + 1) * (Int(K) + 1));
    for (u64 n = 1; n <= Nfreq; ++n) {
      RI pos = inv_e * Rat(n);
      Rat fr = pos.lo - Rat(floor_rat(pos.lo));
      Rat fr2 = pos.hi - Rat(floor_rat(pos.lo));
      // distance to nearest integer (enclosure safe: use pessimistic min)
      Rat dist = std::min(std::min(fr, Rat(1) - fr), std::min(fr2 < 1 ? fr2 : fr, Rat(1) - (fr2 < 1 ? fr2 : fr)));
      if (dist <= 0) throw std::logic_error("dist to integer degenerate");
      // |S_{n,K}| <= 1/((K+1)^2 sin(pi n / e)) and sin(pi d) >= 2 d
      Rat S_hi = std::min(Rat(1, Int(K)), Rat(1) / (Ksq * 2 * dist));
      RI coeff = e_c * Rat(2) / (pi_c * Rat(n)) + e_c * Rat(2) / Rat(Int(Nfreq) + 1);
      et.add((coeff * S_hi).compressed(96));
    }
    Rat et_hi = et.value().hi;
    RI err(-et_hi, et_hi);
    RI tail = half_main + err - quad_term;
    value = value + tail;
    out.components = {{"partial-sum", main.value()},
                      {"tail-main", half_main},
                      {"tail-equidistribution", err},
                      {"tail-quadratic", -quad_term}};
  }
  out.value = value.compressed(bits);
  return out;
}

inline C1Suite compute_c1_suite(const Rat& tol = Rat(1, Int("100000000")),
                                bool accelerate = true, u64 K = 1'000'000,
                                u64 Nfreq = 100'000) {
  C1Suite s;
  s.c1_prime = compute_c1_prime(tol);
  s.c1_double_prime = compute_c1_double_prime(accelerate, K, Nfreq);
  ConstantEnclosure c0 = compute_c0(std::min(tol, Rat(1, Int("1000000000"))));
  s.c1.name = "c1";
  s.c1.value = (s.c1_prime.value + c0.value * s.c1_double_prime.value -
                e_ri() * c0.value * c0.value / Rat(2))
                   .compressed(80);
  // Adjudicate the two printed variants of c1' and c1.  A printed decimal
  // with trailing dots is a truncation: the value it displays lies in
  // [d, d + ulp), so an enclosure "matches" when it fits that window.
  auto matches_display = [](const RI& v, const char* digits, const char* ulp) {
    Rat d = rat_from_string(digits), u = rat_from_string(ulp);
    return d <= v.lo && v.hi < d + u;
  };
  std::string rep;
  bool p15 = matches_display(s.c1_prime.value, "3702015/10000000", "1/10000000");
  bool p51 = matches_display(s.c1_prime.value, "3702051/10000000", "1/10000000");
  rep += "c1': enclosure [" + rat_to_decimal(s.c1_prime.value.lo, 9) + ", " +
         rat_to_decimal(s.c1_prime.value.hi, 9) + "] matches printed ";
  rep += p51 ? "0.3702051" : (p15 ? "0.3702015" : "neither variant");
  rep += "; ";
  bool full = matches_display(s.c1.value, "75554808/100000000", "1/100000000");
  bool trunc = matches_display(s.c1.value, "7554808/10000000", "1/10000000");
  rep += "c1: enclosure [" + rat_to_decimal(s.c1.value.lo, 9) + ", " +
         rat_to_decimal(s.c1.value.hi, 9) + "] matches printed ";
  rep += full ? "0.75554808" : (trunc ? "0.7554808" : "neither variant");
  s.adjudication = rep;
  return s;
}

// Reference curves 1/e, 1/e - c0/logN, 1/e - c0/logN - c1/log^2 N.
struct AsymptoticCurves {
  Rat first, second, third;
};

inline AsymptoticCurves asymptotic_reference(u64 N) {
  if (N < 3) throw std::invalid_argument("asymptotic reference needs N >= 3");
  static const RI inv_e = inv(e_ri());
  static const RI c0 = compute_c0().value;
  // table-reproduction accuracy only needs ~1e-7 on c1; lighter tail settings
  static const RI c1 = compute_c1_suite(Rat(1, Int("10000000")), true, 200'000, 20'000).c1.value;
  RI lg = log_ri(Rat(N), 80);
  AsymptoticCurves out;
  out.first = inv_e.mid();
  out.second = (inv_e - c0 / lg).mid();
  out.third = (inv_e - c0 / lg - c1 / (lg * lg)).mid();
  return out;
}

}  // namespace egs
