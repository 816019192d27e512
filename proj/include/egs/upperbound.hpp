#pragma once

#include <iostream>
#include <optional>

#include "egs/constants.hpp"
#include "egs/ntheory.hpp"

namespace egs {

// f_alpha(x) = floor(1/x) log(ceil(1/(alpha x)) / (1/(alpha x))): the forced
// excess of a large prime near x N trying to reach threshold alpha^-1-ish.
inline RI f_alpha(const Rat& alpha, const Rat& x, long bits = 64) {
  if (x <= 0 || alpha <= 0) throw std::domain_error("f_alpha needs positive arguments");
  Int k = floor_rat(1 / x);
  if (k == 0) return RI(Rat(0));
  Rat w = 1 / (alpha * x);
  Int c = ceil_rat(w);
  if (Rat(c) == w) return RI(Rat(0));  // exact zero on the lattice
  return log_ri(Rat(c) / w, bits) * Rat(k);
}

// Variant with an interval alpha (used with alpha = e).
inline RI f_alpha(const RI& alpha, const Rat& x, long bits = 64) {
  if (x <= 0 || alpha.lo <= 0) throw std::domain_error("f_alpha needs positive arguments");
  Int k = floor_rat(1 / x);
  if (k == 0) return RI(Rat(0));
  RI w = inv(alpha * Rat(x));
  Int c = ceil_rat(w.lo);
  if (ceil_rat(w.hi) != c) throw std::logic_error("alpha precision insufficient for ceiling");
  return log_ri(RI(Rat(c)) / w, bits) * Rat(k);
}

// Piecewise description of f_alpha on (lo, hi] for rational alpha: on each
// piece both floor(1/x) = k and ceil(1/(alpha x)) = c are constant, f is
// k log(c alpha x) (increasing), and the integral has the closed form
// k [x log(c alpha x) - x].
inline StepFunctionDescriptor f_alpha_pieces(const Rat& alpha, const Rat& lo, const Rat& hi,
                                             long bits = 64) {
  if (!(0 < lo && lo < hi)) throw std::domain_error("f_alpha_pieces needs 0 < lo < hi");
  StepFunctionDescriptor out;
  Rat x = lo;
  auto value_at = [&](const Rat& xx, const Int& k, const Int& c) {
    if (k == 0) return RI(Rat(0));
    Rat arg = Rat(c) * alpha * xx;
    if (arg == 1) return RI(Rat(0));
    return log_ri(arg, bits) * Rat(k);
  };
  auto primitive = [&](const Rat& xx, const Int& k, const Int& c) {
    if (k == 0) return RI(Rat(0));
    Rat arg = Rat(c) * alpha * xx;
    return (log_ri(arg, bits) - Rat(1)) * Rat(k) * xx;
  };
  while (x < hi) {
    // constants just right of x (floor(1/x) drops at its lattice points;
    // ceil(1/(alpha x)) keeps its value just right of its own)
    Int k = floor_rat(1 / x);
    if (k > 0 && Rat(k) * x == 1) --k;
    Rat w = 1 / (alpha * x);
    Int c = ceil_rat(w);
    // piece end: floor(1/x) = k until x = 1/k; ceil(1/(alpha x)) = c while
    // 1/(alpha x) > c-1, i.e. x < 1/(alpha (c-1))
    Rat end = hi;
    if (k > 0) end = std::min(end, Rat(1) / Rat(k));
    if (c > 1) end = std::min(end, Rat(1) / (alpha * Rat(c - 1)));
    if (end <= x) throw std::logic_error("piece walk stalled");
    Piece pc;
    pc.lo = x;
    pc.hi = end;
    pc.v_left = value_at(x, k, c);
    pc.v_right = value_at(end, k, c);
    pc.integral = primitive(end, k, c) - primitive(x, k, c);
    pc.monotone = true;
    out.pieces.push_back(std::move(pc));
    x = end;
  }
  return out;
}

// Cached enclosures of prefix sums of log p over the prime table.
class PrimeLogSums {
 public:
  PrimeLogSums(const PrimeTable& table, u64 maxN, long bits = 56) : table_(table) {
    size_t n = table.pi(maxN);
    lo_.reserve(n + 1);
    hi_.reserve(n + 1);
    lo_.push_back(Rat(0));
    hi_.push_back(Rat(0));
    RI acc(Rat(0));
    for (size_t i = 0; i < n; ++i) {
      acc = (acc + log_ri(Rat(table.primes()[i]), bits)).compressed(bits + 16);
      lo_.push_back(acc.lo);
      hi_.push_back(acc.hi);
    }
  }
  // sum of log p over primes with index in (ia, ib] (pi-style indices)
  RI range(u64 ia, u64 ib) const {
    if (ia > ib || ib >= lo_.size()) throw std::out_of_range("prime log range");
    return RI(lo_[ib] - hi_[ia], hi_[ib] - lo_[ia]);
  }
  const PrimeTable& table() const { return table_; }

 private:
  const PrimeTable& table_;
  std::vector<Rat> lo_, hi_;
};

enum class CritMode { exact_sieve, analytic };

// Upper-bound criterion: sum_{t/floor(sqrt t) < p <= N} f_{N/t}(p/N) >
// log N! - N log t certifies t(N) < t.  Directed rounding throughout: the
// sum is lower-bounded, the right side upper-bounded.
class UpperBoundEngine {
 public:
  UpperBoundEngine(u64 N, const PrimeTable& table)
      : N_(N), table_(table), logs_(table, N), log_c_cache_() {
    if (table.limit() < N) throw std::invalid_argument("prime table must cover N");
  }

  u64 N() const { return N_; }

  bool crit_test(u64 t, CritMode mode = CritMode::exact_sieve) const {
    if (t < 5 || t > N_) return false;
    u64 s = isqrt_u64(t);
    Rat y = Rat(t, s);
    RI rhs = factorial_log_bounds(N_, 72) - log_ri(Rat(t), 72) * Rat(N_);
    RI lhs = (mode == CritMode::exact_sieve) ? sieve_sum(t, y) : analytic_sum(t, y);
    return lhs.lo > rhs.hi;
  }

  // Best Lemma-style upper bound: (least t with crit_test true) - 1, found by
  // bisection from the trivial bound then a downward scan with a safety
  // window (the criterion is not monotone right at the boundary).
  u64 best_upper(int window = 64) const {
    RI lf = factorial_log_bounds(N_, 72);
    RI triv = exp_ri(lf / Rat(N_), 72);
    u64 t_hi = to_u64(floor_rat(triv.hi)) + 1;
    if (!crit_test(t_hi)) {
      // the trivial threshold always certifies; scan up defensively
      while (!crit_test(t_hi)) ++t_hi;
    }
    u64 lo = N_ / 4, hi = t_hi;
    while (hi - lo > 1) {
      u64 mid = lo + (hi - lo) / 2;
      if (crit_test(mid)) hi = mid;
      else lo = mid;
    }
    u64 least_true = hi;
    int misses = 0;
    for (u64 tt = hi - 1; tt > N_ / 4 && misses < window; --tt) {
      if (crit_test(tt)) {
        least_true = tt;
        misses = 0;
      } else {
        ++misses;
      }
    }
    return least_true - 1;
  }

 private:
  RI log_c(u64 c) const {
    if (c >= log_c_cache_.size()) log_c_cache_.resize(c + 64);
    auto& slot = log_c_cache_[c];
    if (!slot) slot = log_ri(Rat(c), 72);
    return *slot;
  }

  RI sieve_sum(u64 t, const Rat& y) const {
    RISum sum(64);
    RI logt = log_ri(Rat(t), 72);
    u64 lo = to_u64(floor_rat(y));
    while (lo < N_) {
      u64 x = lo + 1;
      u64 c = (t + x - 1) / x;
      if (c == 0) c = 1;
      u64 k = N_ / x;
      u64 hi = N_;
      if (c >= 2) hi = std::min(hi, (t + c - 2) / (c - 1) - 1);
      hi = std::min(hi, N_ / k);
      u64 ia = table_.pi(lo), ib = table_.pi(hi);
      if (ib > ia) {
        RI part = (log_c(c) - logt) * Rat(ib - ia) + logs_.range(ia, ib);
        sum.add(part * Rat(k));
      }
      lo = hi;
    }
    return sum.value();
  }

  RI analytic_sum(u64 t, const Rat& y) const {
    // exact below the oscillatory-lemma floor, analytic beyond
    Rat alpha = Rat(N_, t);
    Rat cut = std::max(y, Rat(1423));
    RISum sum(64);
    if (y < cut) {
      for (u64 p = table_.next_prime(to_u64(floor_rat(y))); p && Rat(p) <= cut;
           p = table_.next_prime(p))
        if (Rat(p) > y) sum.add(f_alpha(alpha, Rat(p, N_), 64) );
    }
    if (cut < Rat(N_)) {
      // pieces of u -> f_alpha(u / N) on (cut, N]
      StepFunctionDescriptor xs = f_alpha_pieces(alpha, cut / Rat(N_), Rat(1), 64);
      StepFunctionDescriptor us;
      for (auto& pc : xs.pieces) {
        Piece q = pc;
        q.lo = pc.lo * Rat(N_);
        q.hi = pc.hi * Rat(N_);
        q.integral = pc.integral * Rat(N_);
        us.pieces.push_back(std::move(q));
      }
      // guard against rational rounding at the seam
      us.pieces.front().lo = cut;
      us.pieces.back().hi = Rat(N_);
      Rat lo_bound = prime_sum_bounds(cut, Rat(N_), us, PrimeSumWeight::unit,
                                      BoundDirection::lower, 64);
      sum.add(RI(lo_bound, lo_bound));
    }
    return sum.value();
  }

  u64 N_;
  const PrimeTable& table_;
  PrimeLogSums logs_;
  mutable std::vector<std::optional<RI>> log_c_cache_;
};

inline bool upper_crit_test(u64 N, u64 t, CritMode mode, const PrimeTable& table) {
  UpperBoundEngine eng(N, table);
  return eng.crit_test(t, mode);
}

inline u64 best_upper(u64 N, const PrimeTable& table) {
  if (N < 80) throw std::invalid_argument("best_upper expects N >= 80");
  UpperBoundEngine eng(N, table);
  return eng.best_upper();
}

// Verification of the N/e inequality over a range of N: with t = N/e,
//   sum_{p >= (N/e)/floor(sqrt(N/e))} f_e(p/N) > log(2 pi N)/2 + 1/(12N).
struct TneReport {
  bool all_pass = true;
  std::vector<u64> failures;
  std::vector<std::tuple<u64, Rat, Rat>> rows;  // N, lhs lower, rhs upper
};

inline TneReport tne_scan(u64 N_lo, u64 N_hi, const PrimeTable& table,
                          std::ostream* csv = nullptr) {
  if (N_lo < 80 || N_hi > 5000 || N_lo > N_hi)
    throw std::domain_error("tne_scan range must lie in [80, 5000]");
  TneReport rep;
  PrimeLogSums logs(table, N_hi, 64);
  const RI& e = e_ri();
  const RI inv_e = inv(e).compressed(160);
  std::vector<std::optional<RI>> logc_cache;
  auto log_c = [&](u64 c) {
    if (c >= logc_cache.size()) logc_cache.resize(c + 16);
    if (!logc_cache[c]) logc_cache[c] = log_ri(Rat(c), 72);
    return *logc_cache[c];
  };
  if (csv) (*csv) << "N,lhs_lower,rhs_upper\n";
  for (u64 N = N_lo; N <= N_hi; ++N) {
    // s = floor(sqrt(N/e)), y = (N/e)/s
    RI ne = inv_e * Rat(N);
    RI rt = sqrt_ri(ne, 96);
    Int s = floor_rat(rt.lo);
    if (floor_rat(rt.hi) != s) throw std::logic_error("sqrt(N/e) undecided");
    RI y = ne / Rat(s);
    Int iy = floor_rat(y.lo);
    if (floor_rat(y.hi) != iy) throw std::logic_error("(N/e)/s undecided");
    RI logN = log_ri(Rat(N), 72);
    RISum sum(64);
    u64 lo = to_u64(iy);
    while (lo < N) {
      u64 x = lo + 1;
      u64 k = N / x;
      RI w = inv_e * Rat(N, x);  // N/(e x)
      Int c = ceil_rat(w.lo);
      if (ceil_rat(w.hi) != c) throw std::logic_error("ceil(N/(e x)) undecided");
      u64 hi = N / k;
      if (c > 1) {
        RI brk = inv_e * Rat(N) / Rat(c - 1);  // x' < N/(e(c-1))
        Int fb = floor_rat(brk.lo);
        if (floor_rat(brk.hi) != fb) throw std::logic_error("c breakpoint undecided");
        hi = std::min(hi, to_u64(fb));
      }
      hi = std::min(hi, N);
      u64 ia = table.pi(lo), ib = table.pi(hi);
      if (ib > ia)
        sum.add(((log_c(to_u64(c)) + Rat(1) - logN) * Rat(ib - ia) + logs.range(ia, ib)) *
                Rat(k));
      lo = hi;
    }
    RI lhs = sum.value();
    RI rhs = log_ri(pi_ri() * Rat(2 * N), 72) / Rat(2) + Rat(1, 12 * N);
    bool pass = lhs.lo > rhs.hi;
    if (!pass) {
      rep.all_pass = false;
      rep.failures.push_back(N);
    }
    rep.rows.emplace_back(N, lhs.lo, rhs.hi);
    if (csv)
      (*csv) << N << "," << rat_to_decimal(lhs.lo, 9) << "," << rat_to_decimal(rhs.hi, 9)
             << "\n";
  }
  return rep;
}

}  // namespace egs
