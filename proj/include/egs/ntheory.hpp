#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "egs/interval.hpp"
#include "egs/rational.hpp"

namespace egs {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline u64 isqrt_u64(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline u64 sieve_limit_cap() {
  if (const char* env = std::getenv("EGS_SIEVE_LIMIT")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 100'000'000ull;
}

// Sieve-backed prime list with pi(x) lookup.  Immutable after construction.
class PrimeTable {
 public:
  explicit PrimeTable(u64 limit) : limit_(limit) {
    if (limit < 2) throw std::invalid_argument("sieve limit must be >= 2");
    if (limit > sieve_limit_cap())
      throw resource_error("sieve limit " + std::to_string(limit) +
                           " exceeds configured cap " + std::to_string(sieve_limit_cap()) +
                           " (set EGS_SIEVE_LIMIT to raise)");
    sieve();
  }

  u64 limit() const { return limit_; }
  const std::vector<u64>& primes() const { return primes_; }

  // pi(x) for x <= limit.
  u64 pi(u64 x) const {
    if (x > limit_) throw std::out_of_range("pi query beyond sieve limit");
    auto it = std::upper_bound(primes_.begin(), primes_.end(), x);
    return static_cast<u64>(it - primes_.begin());
  }

  bool is_prime(u64 x) const {
    if (x > limit_) throw std::out_of_range("primality query beyond sieve limit");
    return std::binary_search(primes_.begin(), primes_.end(), x);
  }

  // Largest prime <= x, or 0 if none.
  u64 prev_prime(u64 x) const {
    u64 k = pi(x);
    return k == 0 ? 0 : primes_[k - 1];
  }
  // Smallest prime > x, or 0 if none within the table.
  u64 next_prime(u64 x) const {
    u64 k = pi(x);
    return k < primes_.size() ? primes_[k] : 0;
  }

 private:
  void sieve() {
    const u64 seg = 1u << 22;
    std::vector<u64> base;  // primes up to sqrt(limit)
    {
      u64 r = 1;
      while ((r + 1) * (r + 1) <= limit_) ++r;
      std::vector<bool> comp(r + 1, false);
      for (u64 i = 2; i <= r; ++i) {
        if (!comp[i]) {
          base.push_back(i);
          for (u64 j = i * i; j <= r; j += i) comp[j] = true;
        }
      }
    }
    std::vector<bool> mark;
    for (u64 lo = 2; lo <= limit_; lo += seg) {
      u64 hi = std::min(limit_, lo + seg - 1);
      mark.assign(hi - lo + 1, true);
      for (u64 p : base) {
        if (p * p > hi) break;
        u64 start = std::max(p * p, ((lo + p - 1) / p) * p);
        for (u64 j = start; j <= hi; j += p) mark[j - lo] = false;
      }
      for (u64 v = lo; v <= hi; ++v)
        if (mark[v - lo]) primes_.push_back(v);
    }
  }

  u64 limit_;
  std::vector<u64> primes_;
};

inline PrimeTable sieve_primes(u64 limit) { return PrimeTable(limit); }

// nu_p(N!) = sum_j floor(N/p^j)
inline u64 legendre_valuation(u64 N, u64 p) {
  if (p < 2) throw std::invalid_argument("p must be prime");
  u64 total = 0, q = N;
  while (q) {
    q /= p;
    total += q;
  }
  return total;
}

// Digit-sum form: (N - s_p(N)) / (p - 1)
inline u64 legendre_valuation_digit_form(u64 N, u64 p) {
  u64 s = 0, q = N;
  while (q) {
    s += q % p;
    q /= p;
  }
  return (N - s) / (p - 1);
}

// p-adic valuation of an ordinary integer
inline u64 nu_p(u64 n, u64 p) {
  u64 v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

struct FactorialValuation {
  u64 N;
  u64 operator()(u64 p) const { return p > N ? 0 : legendre_valuation(N, p); }
};

// Stirling enclosure of log N! (eq. form: N log N - N + log sqrt(2 pi N) + [0, 1/(12N)]).
inline RI factorial_log_bounds(u64 N, long bits = 96) {
  if (N == 0) throw std::invalid_argument("N must be >= 1");
  if (N == 1) return RI(Rat(0));
  RI logN = log_ri(Rat(N), bits);
  RI half_log_2piN = log_ri(pi_ri() * Rat(2 * N), bits) / Rat(2);
  RI base = logN * Rat(N) - RI(Rat(N)) + half_log_2piN;
  return RI(base.lo, base.hi + Rat(1, 12 * N));
}

// Exact count of integers in (a, b] coprime to 6, for rational 0 <= a <= b.
inline Int rough_count(const Rat& a, const Rat& b) {
  if (a < 0 || b < a) throw std::invalid_argument("rough_count needs 0 <= a <= b");
  auto upto = [](const Int& n) { return n - floor_div(n, 2) - floor_div(n, 3) + floor_div(n, 6); };
  return upto(floor_rat(b)) - upto(floor_rat(a));
}

// Number of 3-rough integers in [1, n].
inline Int rough3_upto(const Int& n) {
  if (n <= 0) return 0;
  return n - floor_div(n, 2) - floor_div(n, 3) + floor_div(n, 6);
}

struct SmoothDecomposition {
  Int value;   // 2^n 3^m (times 12^a in anchored mode, folded into n, m)
  u64 n = 0;   // exponent of 2 in value
  u64 m = 0;   // exponent of 3 in value
  u64 anchor_a = 0;  // exponent of 12 used by the anchored form (0 in plain mode)
};

// Least 3-smooth number >= x (x >= 1 rational).
inline SmoothDecomposition smooth_ceiling(const Rat& x) {
  if (x < 1) throw std::domain_error("smooth ceiling requires x >= 1");
  SmoothDecomposition best;
  Int pow3 = 1;
  u64 m = 0;
  for (;;) {
    // least 2^n with 2^n * 3^m >= x
    Rat need = x / pow3;
    u64 n = 0;
    Int pow2 = 1;
    if (need > 1) {
      Int c = ceil_rat(need);
      while (pow2 < c) {
        pow2 <<= 1;
        ++n;
      }
    }
    Int cand = pow2 * pow3;
    if (best.value == 0 || cand < best.value) {
      best.value = cand;
      best.n = n;
      best.m = m;
    }
    if (pow3 >= x) break;
    pow3 *= 3;
    ++m;
  }
  return best;
}

// Anchored variant: 12^a * ceil23(x / 12^a) with a the largest integer such
// that 12^a <= x / L; requires 1 <= L <= x.
inline SmoothDecomposition smooth_ceiling_anchored(const Rat& x, const Rat& L) {
  if (L < 1 || L > x) throw std::domain_error("anchored smooth ceiling requires 1 <= L <= x");
  Rat bound = x / L;
  u64 a = 0;
  Int p12 = 1;
  while (p12 * 12 <= bound) {
    p12 *= 12;
    ++a;
  }
  SmoothDecomposition inner = smooth_ceiling(x / p12);
  SmoothDecomposition out;
  out.value = inner.value * p12;
  out.n = inner.n + 2 * a;
  out.m = inner.m + a;
  out.anchor_a = a;
  return out;
}

// All 3-smooth numbers <= X, ascending.
inline std::vector<Int> smooth_numbers_upto(const Int& X) {
  std::vector<Int> out;
  for (Int p3 = 1; p3 <= X; p3 *= 3)
    for (Int v = p3; v <= X; v *= 2) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

// kappa_L table rows (threshold L, ratio bound) from the parameter table for
// the 3-smooth gap lemma; each row is sharp at its threshold.
struct KappaRow {
  Rat threshold;
  Rat ratio;  // kappa upper bound is log(ratio)
};

inline const std::vector<KappaRow>& kappa_table() {
  static const std::vector<KappaRow> rows = [] {
    auto pw = [](Int b, unsigned e) {
      Int r = 1;
      while (e--) r *= b;
      return r;
    };
    std::vector<KappaRow> t;
    t.push_back({Rat(1, 2), Rat(2)});
    t.push_back({Rat(4, 3), Rat(3, 2)});
    t.push_back({Rat(9, 2), Rat(4, 3)});
    t.push_back({Rat(81, 2), Rat(32, 27)});
    t.push_back({Rat(1024, 3), Rat(9, 8)});
    t.push_back({Rat(pw(2, 18), 3), Rat(pw(3, 7), pw(2, 11))});
    t.push_back({Rat(pw(3, 17), 2), Rat(pw(2, 8), pw(3, 5))});
    t.push_back({Rat(pw(3, 29), 2), Rat(pw(2, 27), pw(3, 17))});
    t.push_back({Rat(pw(3, 41), 2), Rat(pw(2, 46), pw(3, 29))});
    return t;
  }();
  return rows;
}

enum class KappaMode { table, scan };

// Certified upper bound (table mode) or empirical scan supremum (a lower
// bound) for kappa_L.  The two are deliberately distinct quantities.
inline RI kappa_bound(const Rat& L, KappaMode mode, std::optional<Rat> scan_limit = {},
                      long bits = 96) {
  if (mode == KappaMode::table) {
    const auto& rows = kappa_table();
    if (L < rows.front().threshold) {
      std::string msg = "kappa table has no row for L below 1/2; available thresholds:";
      for (const auto& r : rows) msg += " " + rat_to_string(r.threshold);
      throw std::domain_error(msg);
    }
    Rat best = rows.front().ratio;
    for (const auto& r : rows)
      if (r.threshold <= L) best = r.ratio;
    return log_ri(best, bits);
  }
  if (!scan_limit || *scan_limit <= L)
    throw std::invalid_argument("scan mode requires scan_limit > L");
  std::vector<Int> sm = smooth_numbers_upto(ceil_rat(*scan_limit * Rat(3, 2)) + 1);
  Rat best(1);
  for (size_t i = 0; i + 1 < sm.size(); ++i) {
    Rat x0 = std::max(Rat(sm[i]), L);
    if (x0 > *scan_limit) break;
    if (Rat(sm[i + 1]) <= x0) continue;
    Rat ratio = Rat(sm[i + 1]) / x0;
    if (ratio > best) best = ratio;
  }
  return log_ri(best, bits);
}

// E(x) = 0.95 sqrt(x) + 3.83e-9 x, the effective prime-sum error majorant.
inline RI E_of(const Rat& x, long bits = 96) {
  return sqrt_ri(x, bits) * Rat(19, 20) + RI(x * Rat(383, Int(100000000000ll)));
}

// pi(x) bounds: lower x/log x + x/log^2 x for x >= 599, upper
// x/log x + 1.2762 x / log^2 x for x > 1; exact from table when available.
inline RI pi_bounds(const Rat& x, const PrimeTable* table = nullptr, long bits = 96) {
  if (x <= 1) throw std::domain_error("pi_bounds requires x > 1");
  if (table && x <= Rat(table->limit())) {
    u64 v = table->pi(to_u64(floor_rat(x)));
    return RI(Rat(v));
  }
  RI lx = log_ri(x, bits);
  RI upper = RI(x) / lx + RI(x) * Rat(12762, 10000) / (lx * lx);
  Rat lo(0);
  if (x >= 599) lo = (RI(x) / lx + RI(x) / (lx * lx)).lo;
  return RI(lo, upper.hi);
}

// One-sided bounds on pi(x) - pi(y) for 1423 <= y <= x (oscillatory-sum lemma,
// indicator case).
inline Rat pi_range_upper(const Rat& y, const Rat& x, long bits = 96) {
  if (!(Rat(1423) <= y && y <= x)) throw std::domain_error("pi_range needs 1423 <= y <= x");
  RI ly = log_ri(y, bits), lx = log_ri(x, bits);
  RI val = RI(x - y) / (ly * Rat(2)) + RI(x - y) / (lx * Rat(2)) + E_of(x, bits) * Rat(2) / ly;
  return val.hi;
}

inline Rat pi_range_lower(const Rat& y, const Rat& x, long bits = 96) {
  if (!(Rat(1423) <= y && y <= x)) throw std::domain_error("pi_range needs 1423 <= y <= x");
  RI ly = log_ri(y, bits);
  RI lmid = log_ri((x + y) / 2, bits);
  RI corr = RI(Rat(1)) - RI(Rat(2)) / sqrt_ri(y, bits);
  RI val = corr * RI(x - y) / lmid - E_of(x, bits) * Rat(2) / ly;
  return std::max(val.lo, Rat(0));
}

// A step/piecewise-monotone function descriptor on (lo, hi]: per piece the
// endpoint values, the monotone direction, and an enclosure of the integral
// over the piece.  Callers (which know the closed form) supply the pieces.
struct Piece {
  Rat lo, hi;       // piece domain (lo, hi]
  RI v_left;        // limit value at lo+
  RI v_right;       // value at hi
  RI integral;      // enclosure of integral of b over (lo, hi)
  bool monotone;    // true if monotone on the piece (direction inferred)
};

struct StepFunctionDescriptor {
  std::vector<Piece> pieces;  // ascending, contiguous

  Rat domain_lo() const { return pieces.front().lo; }
  Rat domain_hi() const { return pieces.back().hi; }

  RI integral() const {
    RISum s;
    for (const auto& p : pieces) s.add(p.integral);
    return s.value();
  }

  // Augmented total variation ||b||_{TV*}: |b(lo+)| + |b(hi)| + total variation.
  RI tv_star() const {
    RISum s;
    s.add(abs_ri(pieces.front().v_left));
    s.add(abs_ri(pieces.back().v_right));
    for (size_t i = 0; i < pieces.size(); ++i) {
      s.add(abs_ri(pieces[i].v_right - pieces[i].v_left));
      if (i + 1 < pieces.size()) s.add(abs_ri(pieces[i + 1].v_left - pieces[i].v_right));
    }
    return s.value();
  }
};

enum class PrimeSumWeight { unit, logp };
enum class BoundDirection { upper, lower };

// One-sided bounds for sums of b over primes in (y, x], b non-negative of
// bounded variation, via the effective oscillatory-sum estimates.
// weight unit:  sum_{y<p<=x} b(p);  weight logp:  sum b(p) log p.
inline Rat prime_sum_bounds(const Rat& y, const Rat& x, const StepFunctionDescriptor& b,
                            PrimeSumWeight weight, BoundDirection dir, long bits = 96) {
  if (y < 1423) throw std::domain_error("prime_sum_bounds requires y >= 1423 (sieve exactly below)");
  if (!(y <= x)) throw std::domain_error("prime_sum_bounds requires y <= x");
  if (b.domain_lo() != y || b.domain_hi() != x)
    throw std::invalid_argument("descriptor domain must match (y, x]");
  RI I = b.integral();
  RI tv = b.tv_star();
  RI Ex = E_of(x, bits);
  if (weight == PrimeSumWeight::unit) {
    if (dir == BoundDirection::upper) {
      RI ly = log_ri(y, bits);
      return ((I + tv * Ex) / ly).hi;
    }
    RI lx = log_ri(x, bits);
    RI corr = RI(Rat(1)) - RI(Rat(2)) / sqrt_ri(y, bits);
    Rat v = ((corr * I - tv * Ex) / lx).lo;
    return std::max(v, Rat(0));
  }
  // log p weight: integral of (1 - 2/sqrt(t)) b(t) dt +- tv * E(x).
  RISum corr_sum;
  for (const auto& p : b.pieces) {
    RI w = RI(Rat(2)) / sqrt_ri(RI(p.lo, p.hi), bits);
    corr_sum.add(p.integral * w);
  }
  RI main = I - corr_sum.value();
  if (dir == BoundDirection::upper) return (main + tv * Ex).hi;
  return (main - tv * Ex).lo;
}

}  // namespace egs
