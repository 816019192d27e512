#pragma once

#include <atomic>
#include <cmath>
#include <functional>
#include <optional>
#include <thread>

#include "egs/certify.hpp"
#include "egs/ntheory.hpp"

namespace egs {

struct residual_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GreedyConfig {
  enum class Variant { standard, fast };
  Variant variant = Variant::standard;
  u64 M = 0;                   // split point between block phase and cofactor phase; 0 = default
  u64 smooth_table_limit = 0;  // cofactor table bound; 0 = default (t_cap)
  unsigned threads = 1;
};

namespace detail {

struct SmallFactor {
  u64 p;
  u64 e;
};

inline void factorize_small(u64 m, const std::vector<u64>& primes,
                            std::vector<SmallFactor>& out) {
  out.clear();
  for (u64 p : primes) {
    if (p * p > m) break;
    if (m % p == 0) {
      u64 e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      out.push_back({p, e});
    }
  }
  if (m > 1) out.push_back({m, 1});
}

}  // namespace detail

// Shared state for repeated greedy calls at the same N (the exhaustive
// t-search makes thousands of them): prime table slice, nu_p(N!) for small
// primes, and the smooth-cofactor table with the prime-ratio prefilter.
class GreedyEngine {
 public:
  GreedyEngine(u64 N, const GreedyConfig& cfg, const PrimeTable& table)
      : N_(N), cfg_(cfg), table_(table) {
    if (table.limit() < N) throw std::invalid_argument("prime table must cover N");
    if (N < 4) throw std::invalid_argument("greedy engine requires N >= 4");
    t_cap_ = cfg.smooth_table_limit ? cfg.smooth_table_limit : N / 2 + 2;
    M_ = cfg.M;
    if (M_ == 0) {
      M_ = isqrt_u64(N);
      if (cfg.variant == GreedyConfig::Variant::fast) {
        // smallest M with M(M-1) >= t_cap; the block phase stays sound for
        // p <= sqrt(N) because floor(N/p) undercounts nu_p there.
        u64 m = isqrt_u64(t_cap_) + 1;
        while (m * (m - 1) < t_cap_) ++m;
        M_ = std::min(M_, m);
      }
    }
    for (u64 p : table_.primes()) {
      if (p > M_) break;
      small_primes_.push_back(p);
      nuN_.push_back(legendre_valuation(N_, p));
    }
    build_cofactors();
  }

  u64 N() const { return N_; }
  u64 M() const { return M_; }
  u64 t_cap() const { return t_cap_; }
  const PrimeTable& table() const { return table_; }

  struct Phase1 {
    std::vector<Certificate::Block> blocks;
    Int count;                 // factors produced by the block phase
    std::vector<i64> residual; // per small prime (indexed like small_primes_)
  };

  // Block phase: all primes p > M get nu-many copies of p*ceil(t/p), grouped
  // over intervals where ceil(t/x) and floor(N/x) are both constant.
  Phase1 phase1(u64 t) const {
    Phase1 out;
    out.count = 0;
    out.residual.assign(small_primes_.size(), 0);
    for (size_t i = 0; i < small_primes_.size(); ++i)
      out.residual[i] = static_cast<i64>(nuN_[i]);
    std::vector<detail::SmallFactor> fac;
    u64 lo = M_;
    while (lo < N_) {
      u64 x = lo + 1;
      u64 m = (t + x - 1) / x;
      if (m == 0) m = 1;
      u64 e = N_ / x;
      u64 hi = N_;
      if (m >= 2) hi = std::min(hi, (t + m - 2) / (m - 1) - 1);
      hi = std::min(hi, N_ / e);
      u64 cnt = table_.pi(hi) - table_.pi(lo);
      if (cnt > 0) {
        u64 pmin = table_.next_prime(lo);
        u64 pmax = table_.prev_prime(hi);
        out.blocks.push_back({Int(m), pmin, pmax, Int(e)});
        out.count += Int(e) * Int(cnt);
        if (m > 1) {
          detail::factorize_small(m, small_primes_, fac);
          for (const auto& f : fac) {
            size_t idx = small_index(f.p);
            out.residual[idx] -= static_cast<i64>(e * cnt * f.e);
            if (out.residual[idx] < 0)
              throw residual_error(
                  "block-phase residual negative at p=" + std::to_string(f.p) +
                  "; raise the split point M");
          }
        }
      }
      lo = hi;
    }
    return out;
  }

  // Full standard-variant run.
  Certificate run(u64 t) const {
    if (t < 2 || t > t_cap_)
      throw std::invalid_argument("t out of engine range [2, " + std::to_string(t_cap_) + "]");
    Phase1 ph = phase1(t);
    Certificate cert;
    cert.N = N_;
    cert.t = t;
    cert.prime_blocks = std::move(ph.blocks);
    pack_small(t, ph.residual, /*halt_on_failure=*/true, cert);
    return cert;
  }

  // Fast variant: same block phase; cofactor phase may fall back to p^2
  // cofactors, and a final phase combines leftover primes in decreasing
  // order into factors >= t.
  Certificate run_fast(u64 t) const {
    if (t < 2 || t > t_cap_)
      throw std::invalid_argument("t out of engine range");
    Phase1 ph = phase1(t);
    Certificate cert;
    cert.N = N_;
    cert.t = t;
    cert.prime_blocks = std::move(ph.blocks);
    pack_small_fast(t, ph.residual, cert);
    return cert;
  }

  // Greedy packing of an arbitrary residual valuation map into factors >= t;
  // used by the floor+residuals and smooth-factorization methods.  Does not
  // halt on a stuck prime (harvests whatever it can).
  void pack_residual_map(u64 t, std::vector<std::pair<u64, i64>>& residual_desc,
                         Certificate& cert) const {
    // split: primes > M handled as single-prime entries with table cofactors;
    // primes <= M folded into the small residual vector.
    std::vector<i64> small(small_primes_.size(), 0);
    std::vector<std::pair<u64, i64>> large;
    for (auto& [p, r] : residual_desc) {
      if (r <= 0) continue;
      if (p <= M_) small[small_index(p)] += r;
      else large.emplace_back(p, r);
    }
    std::sort(large.begin(), large.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    // large primes: cofactor from the small residual
    size_t ptr = 0;
    std::vector<detail::SmallFactor> fac;
    for (auto& [p, r] : large) {
      while (r > 0) {
        u64 need = (t + p - 1) / p;
        size_t j = advance_pointer(ptr, need, p, t);
        bool found = false;
        for (size_t k = j; k < cofactors_.size(); ++k) {
          const Cof& c = cofactors_[k];
          if (!usable(c, p, t)) continue;
          detail::factorize_small(c.m, small_primes_, fac);
          i64 e = r;  // copies limited by p itself (nu_p of cofactor is 0: c.m <= t_cap, p > M >= sqrt... c.m < p impossible? c.m can exceed p but is M-smooth so p dead)
          bool ok = true;
          for (const auto& f : fac) {
            size_t idx = small_index(f.p);
            i64 cap = small[idx] / static_cast<i64>(f.e);
            if (cap == 0) { ok = false; break; }
            e = std::min(e, cap);
          }
          if (!ok || e == 0) continue;
          for (const auto& f : fac) small[small_index(f.p)] -= e * static_cast<i64>(f.e);
          cert.explicit_factors.emplace_back(Int(e), Int(c.m) * Int(p));
          r -= e;
          found = true;
          break;
        }
        if (!found) break;  // this prime is stuck; move on
      }
    }
    pack_small(t, small, /*halt_on_failure=*/false, cert);
  }

  const std::vector<u64>& small_primes() const { return small_primes_; }
  const std::vector<u64>& small_valuations() const { return nuN_; }

 private:
  struct Cof {
    u64 m, pmin, pmax;
  };

  size_t small_index(u64 p) const {
    auto it = std::lower_bound(small_primes_.begin(), small_primes_.end(), p);
    if (it == small_primes_.end() || *it != p)
      throw std::logic_error("prime out of small range");
    return static_cast<size_t>(it - small_primes_.begin());
  }

  bool usable(const Cof& c, u64 p, u64 t) const {
    if (c.m > 1 && c.pmax > p) return false;                       // must be p-smooth
    if (Int(c.m) * Int(c.pmax) > Int(t) * Int(c.pmin)) return false;  // ratio filter
    return true;
  }

  // advance the global pointer over entries rejected for t-monotone reasons
  size_t advance_pointer(size_t& ptr, u64 need, u64 /*p*/, u64 /*t*/) const {
    while (ptr < cofactors_.size() && cofactors_[ptr].m < need) ++ptr;
    return ptr;
  }

  void build_cofactors() {
    const auto& ps = small_primes_;
    std::vector<Cof> out;
    out.push_back({1, 1, 1});
    // DFS over M-smooth numbers <= t_cap, tracking min/max prime factor.
    std::function<void(size_t, u64, u64, u64)> gen = [&](size_t i, u64 val, u64 pmin, u64 pmax) {
      for (size_t j = i; j < ps.size(); ++j) {
        u64 p = ps[j];
        if (val > t_cap_ / p) break;
        u64 v = val * p;
        u64 lo = (pmin == 1) ? p : pmin;
        while (v <= t_cap_) {
          // prefilter with t_cap: keep iff v * pmax' <= t_cap * pmin'
          if (Int(v) * Int(p) <= Int(t_cap_) * Int(lo)) out.push_back({v, lo, p});
          gen(j + 1, v, lo, p);
          if (v > t_cap_ / p) break;
          v *= p;
        }
      }
    };
    gen(0, 1, 1, 1);
    std::sort(out.begin(), out.end(), [](const Cof& a, const Cof& b) { return a.m < b.m; });
    cofactors_ = std::move(out);
  }

  // Standard cofactor phase over small primes in decreasing order, keeping a
  // global forward-only cursor into the cofactor table (cofactors are used in
  // nondecreasing order).  halt_on_failure mirrors the plain greedy HALT.
  //
  // Cursor discipline: entries may be skipped permanently (cursor advance)
  // only for reasons that stay true for every later prime — m below the
  // ceil(t/p) threshold (which grows as p falls), smoothness/ratio failures,
  // and exhausted budgets at primes other than p.  A shortage in p's own
  // budget is local to p, so those entries are skipped without moving the
  // cursor.
  void pack_small(u64 t, std::vector<i64>& residual, bool halt_on_failure,
                  Certificate& cert) const {
    size_t ptr = 0;
    std::vector<detail::SmallFactor> fac;
    for (size_t pi = small_primes_.size(); pi-- > 0;) {
      u64 p = small_primes_[pi];
      if (residual[pi] <= 0) continue;
      u64 need = (t + p - 1) / p;
      advance_pointer(ptr, need, p, t);
      size_t k = ptr;
      bool stuck = false;
      while (residual[pi] > 0) {
        if (k >= cofactors_.size()) { stuck = true; break; }
        const Cof& c = cofactors_[k];
        bool at_front = (k == ptr);
        if (!usable(c, p, t)) {
          if (at_front) ptr = k + 1;
          ++k;
          continue;
        }
        detail::factorize_small(c.m, small_primes_, fac);
        i64 per_copy_p = 1;
        i64 e = std::numeric_limits<i64>::max();
        bool cross_budget_dead = false;
        for (const auto& f : fac) {
          if (f.p == p) { per_copy_p += static_cast<i64>(f.e); continue; }
          i64 cap = residual[small_index(f.p)] / static_cast<i64>(f.e);
          if (cap == 0) { cross_budget_dead = true; break; }
          e = std::min(e, cap);
        }
        if (cross_budget_dead) {
          if (at_front) ptr = k + 1;
          ++k;
          continue;
        }
        i64 cap_p = residual[pi] / per_copy_p;
        if (cap_p == 0) {  // local to this prime: keep the entry for later primes
          ++k;
          continue;
        }
        e = std::min(e, cap_p);
        for (const auto& f : fac)
          if (f.p != p) residual[small_index(f.p)] -= e * static_cast<i64>(f.e);
        residual[pi] -= e * per_copy_p;
        cert.explicit_factors.emplace_back(Int(e), Int(c.m) * Int(p));
        // same entry may admit more copies only if e was capped by cross
        // budgets that are now zero, so re-testing k is a cheap no-op
      }
      if (stuck && halt_on_failure) return;
    }
  }

  // Fast-variant cofactor phase: on failure for p, try cofactors for p^2;
  // leftovers are combined in decreasing order into factors >= t, with a
  // final below-t chunk merged into the largest combined factor.
  void pack_small_fast(u64 t, std::vector<i64>& residual, Certificate& cert) const {
    size_t ptr = 0;
    std::vector<detail::SmallFactor> fac;
    for (size_t pi = small_primes_.size(); pi-- > 0;) {
      u64 p = small_primes_[pi];
      u64 need = (t + p - 1) / p;
      advance_pointer(ptr, need, p, t);
      size_t local = ptr;
      while (residual[pi] > 0) {
        bool found = false;
        for (size_t k = local; k < cofactors_.size(); ++k) {
          const Cof& c = cofactors_[k];
          if (!usable(c, p, t)) continue;
          detail::factorize_small(c.m, small_primes_, fac);
          i64 per_copy_p = 1;
          i64 e = std::numeric_limits<i64>::max();
          bool ok = true;
          for (const auto& f : fac) {
            if (f.p == p) { per_copy_p += static_cast<i64>(f.e); continue; }
            i64 cap = residual[small_index(f.p)] / static_cast<i64>(f.e);
            if (cap == 0) { ok = false; break; }
            e = std::min(e, cap);
          }
          if (ok) {
            i64 cap_p = residual[pi] / per_copy_p;
            if (cap_p == 0) ok = false; else e = std::min(e, cap_p);
          }
          if (!ok) { local = k + 1; continue; }
          for (const auto& f : fac) residual[small_index(f.p)] -= e * static_cast<i64>(f.e);
          residual[pi] -= e;
          cert.explicit_factors.emplace_back(Int(e), Int(c.m) * Int(p));
          local = k;
          found = true;
          break;
        }
        if (found) continue;
        // p^2 fallback: smallest cofactor m with m p^2 >= t
        if (residual[pi] >= 2) {
          u64 need2 = (t + p * p - 1) / (p * p);
          bool found2 = false;
          for (size_t k = 0; k < cofactors_.size(); ++k) {
            const Cof& c = cofactors_[k];
            if (c.m < need2 || !usable(c, p, t)) continue;
            detail::factorize_small(c.m, small_primes_, fac);
            i64 e = residual[pi] / 2;
            bool ok = true;
            for (const auto& f : fac) {
              if (f.p == p) { ok = false; break; }  // keep the fallback simple
              i64 cap = residual[small_index(f.p)] / static_cast<i64>(f.e);
              if (cap == 0) { ok = false; break; }
              e = std::min(e, cap);
            }
            if (!ok || e == 0) continue;
            for (const auto& f : fac) residual[small_index(f.p)] -= e * static_cast<i64>(f.e);
            residual[pi] -= 2 * e;
            cert.explicit_factors.emplace_back(Int(e), Int(c.m) * Int(p) * Int(p));
            found2 = true;
            break;
          }
          if (found2) continue;
        }
        break;  // leave the leftovers to the combining phase
      }
    }
    // Final phase: combine leftover primes in decreasing order.
    Int combined(1);
    Int largest(0);
    size_t largest_idx = SIZE_MAX;
    for (size_t pi = small_primes_.size(); pi-- > 0;) {
      u64 p = small_primes_[pi];
      while (residual[pi] > 0) {
        combined *= Int(p);
        --residual[pi];
        if (combined >= Int(t)) {
          cert.explicit_factors.emplace_back(Int(1), combined);
          if (combined > largest) {
            largest = combined;
            largest_idx = cert.explicit_factors.size() - 1;
          }
          combined = 1;
        }
      }
    }
    if (combined > 1) {
      // stopping rule for the final sub-threshold chunk: glue it onto the
      // largest combined factor (or the largest explicit factor if none)
      if (largest_idx == SIZE_MAX) {
        if (!cert.explicit_factors.empty()) {
          size_t best = 0;
          for (size_t i = 1; i < cert.explicit_factors.size(); ++i)
            if (cert.explicit_factors[i].second > cert.explicit_factors[best].second) best = i;
          largest_idx = best;
        }
      }
      if (largest_idx != SIZE_MAX) {
        auto& [mult, f] = cert.explicit_factors[largest_idx];
        if (mult == 1) {
          f *= combined;
        } else {
          mult -= 1;
          cert.explicit_factors.emplace_back(Int(1), f * combined);
        }
      }
      // with no factor at all to glue onto, the chunk is dropped (it cannot
      // form a t-admissible factor)
    }
  }

  u64 N_, M_, t_cap_;
  GreedyConfig cfg_;
  const PrimeTable& table_;
  std::vector<u64> small_primes_;
  std::vector<u64> nuN_;
  std::vector<Cof> cofactors_;
};

// Plain greedy loop straight from the definition: repeatedly take the largest
// prime in surplus and the smallest multiple >= t dividing the residual.
// Used for small N and as a cross-check oracle.
inline Certificate greedy_naive(u64 N, u64 t, const PrimeTable& table) {
  if (table.limit() < N) throw std::invalid_argument("prime table must cover N");
  std::vector<u64> primes;
  std::vector<i64> residual;
  for (u64 p : table.primes()) {
    if (p > N) break;
    primes.push_back(p);
    residual.push_back(static_cast<i64>(legendre_valuation(N, p)));
  }
  double residual_log = 0;
  for (size_t i = 0; i < primes.size(); ++i)
    residual_log += residual[i] * std::log(static_cast<double>(primes[i]));

  Certificate cert;
  cert.N = N;
  cert.t = t;
  std::map<Int, Int> factors;
  std::vector<detail::SmallFactor> fac;
  size_t top = primes.size();
  for (;;) {
    while (top > 0 && residual[top - 1] == 0) --top;
    if (top == 0) break;
    size_t pi = top - 1;
    u64 p = primes[pi];
    bool added = false;
    for (u64 m = (t + p - 1) / p;; ++m) {
      if (std::log(static_cast<double>(m)) + std::log(static_cast<double>(p)) >
          residual_log + 1e-9)
        break;
      detail::factorize_small(m, primes, fac);
      bool ok = true;
      i64 self = 1;
      for (const auto& f : fac) {
        auto it = std::lower_bound(primes.begin(), primes.end(), f.p);
        if (it == primes.end() || *it != f.p) { ok = false; break; }
        size_t idx = static_cast<size_t>(it - primes.begin());
        i64 needed = static_cast<i64>(f.e) + (f.p == p ? 1 : 0);
        if (f.p == p) self = needed;
        if (residual[idx] < needed) { ok = false; break; }
      }
      (void)self;
      if (!ok) continue;
      for (const auto& f : fac) {
        size_t idx = static_cast<size_t>(
            std::lower_bound(primes.begin(), primes.end(), f.p) - primes.begin());
        residual[idx] -= static_cast<i64>(f.e);
        residual_log -= f.e * std::log(static_cast<double>(f.p));
      }
      residual[pi] -= 1;
      residual_log -= std::log(static_cast<double>(p));
      factors[Int(m) * Int(p)] += 1;
      added = true;
      break;
    }
    if (!added) break;  // HALT
  }
  for (const auto& [f, mult] : factors) cert.explicit_factors.emplace_back(mult, f);
  return cert;
}

// Dispatcher: optimized path for the standing range, plain loop elsewhere.
inline Certificate greedy_subfactorization(u64 N, u64 t, const GreedyConfig& cfg,
                                           const PrimeTable& table) {
  if (t < 1) throw std::invalid_argument("t must be >= 1");
  if (N >= 16 && t >= 2 && 4 * t > N && 2 * t < N && cfg.variant == GreedyConfig::Variant::standard) {
    GreedyEngine engine(N, cfg, table);
    return engine.run(t);
  }
  if (cfg.variant == GreedyConfig::Variant::fast) {
    GreedyEngine engine(N, cfg, table);
    return engine.run_fast(t);
  }
  return greedy_naive(N, t, table);
}

inline Certificate fast_greedy(u64 N, u64 t, const GreedyConfig& cfg, const PrimeTable& table) {
  GreedyConfig c = cfg;
  c.variant = GreedyConfig::Variant::fast;
  GreedyEngine engine(N, c, table);
  if (t < 2 || 2 * t >= N) return greedy_naive(N, t, table);
  return engine.run_fast(t);
}

namespace detail {

// Count with automatic split-point raise on residual failure.
inline Int robust_count(const GreedyEngine& engine, u64 t, const GreedyConfig& cfg,
                        const PrimeTable& table, Certificate* cert_out = nullptr) {
  try {
    Certificate c = cfg.variant == GreedyConfig::Variant::fast ? engine.run_fast(t)
                                                               : engine.run(t);
    Int n = c.count(table);
    if (cert_out) *cert_out = std::move(c);
    return n;
  } catch (const residual_error&) {
    GreedyConfig retry = cfg;
    retry.M = engine.M() * 2;
    GreedyEngine e2(engine.N(), retry, table);
    Certificate c = retry.variant == GreedyConfig::Variant::fast ? e2.run_fast(t) : e2.run(t);
    Int n = c.count(table);
    if (cert_out) *cert_out = std::move(c);
    return n;
  }
}

}  // namespace detail

enum class SearchStrategy { bisection, heuristic };

// Find some t in [t0(N), t1(N)] with a verified certificate, by bisection or
// the count-guided heuristic (next t ~ exp((B/N) log t), clamped to the
// bracket with the (3lo+hi)/4 / (lo+3hi)/4 fallback rules).
inline std::pair<u64, Certificate> search_t(u64 N, SearchStrategy strategy,
                                            GreedyConfig::Variant variant,
                                            const PrimeTable& table) {
  if (N < 10) {
    // tiny N: plain downward scan with the naive loop
    for (u64 t = N;; --t) {
      Certificate c = greedy_naive(N, t, table);
      if (c.count(table) >= N) return {t, std::move(c)};
      if (t == 1) throw std::logic_error("greedy failed even at t=1");
    }
  }
  GreedyConfig cfg;
  cfg.variant = variant;
  GreedyEngine engine(N, cfg, table);
  u64 t_low = std::max<u64>(2, N / 4);
  u64 t_high = N / 2 + 2;
  Certificate best_cert;
  u64 best_t = 0;
  auto attempt = [&](u64 t) {
    Certificate c;
    Int cnt = detail::robust_count(engine, t, cfg, table, &c);
    bool ok = cnt >= Int(N);
    if (ok && t > best_t) {
      best_t = t;
      best_cert = std::move(c);
    }
    return std::make_pair(ok, cnt);
  };
  // establish the bracket: make sure t_low really succeeds
  while (t_low > 2 && !attempt(t_low).first) t_low /= 2;
  if (best_t == 0) attempt(2);
  if (best_t == 0) {
    // the greedy with t = 2 always packs at least N factors for N >= 10
    throw std::logic_error("greedy bracket collapse at N=" + std::to_string(N));
  }
  u64 t = std::max(t_low + 1, std::min(t_high - 1, (N + 2) / 3));
  while (t_high - t_low > 1) {
    auto [ok, cnt] = attempt(t);
    if (ok) t_low = t;
    else t_high = t;
    u64 next;
    if (strategy == SearchStrategy::bisection) {
      next = (t_low + t_high) / 2;
    } else {
      double b = static_cast<double>(cnt.convert_to<double>());
      double guess = std::exp(b / static_cast<double>(N) * std::log(static_cast<double>(t)));
      next = static_cast<u64>(std::llround(guess));
      if (next <= t_low) next = (3 * t_low + t_high) / 4;
      if (next >= t_high) next = (t_low + 3 * t_high) / 4;
      if (next <= t_low || next >= t_high) next = (t_low + t_high) / 2;
    }
    if (next == t) next = (t_low + t_high) / 2;
    t = next;
    if (t <= t_low || t >= t_high) break;
  }
  return {best_t, std::move(best_cert)};
}

// Exact t1(N): the largest t at which the standard greedy produces at least
// N factors.  Uses the block-phase upper bound B1 + floor(log R / log t) to
// bracket from above, then an exhaustive descending scan (parallel across
// contiguous chunks, deterministic max-reduction).
inline std::pair<u64, Certificate> t1_exhaustive(u64 N, unsigned threads,
                                                 const PrimeTable& table,
                                                 u64 ceiling = 1'000'000) {
  if (N > ceiling)
    throw resource_error("t1 exhaustive scan capped at N <= " + std::to_string(ceiling) +
                         "; use the heuristic search for larger N");
  GreedyConfig cfg;
  GreedyEngine engine(N, cfg, table);
  auto [t_a, cert_a] = search_t(N, SearchStrategy::heuristic, GreedyConfig::Variant::standard, table);

  // upper bound on achievable count at threshold t (rigorous: interval logs)
  auto upper_count = [&](u64 t) -> Int {
    auto ph = engine.phase1(t);
    RISum logR(64);
    const auto& sp = engine.small_primes();
    for (size_t i = 0; i < sp.size(); ++i)
      if (ph.residual[i] > 0) logR.add(log_ri(Rat(sp[i]), 48) * Rat(ph.residual[i]));
    RI lr = logR.value();
    RI lt = log_ri(Rat(t), 48);
    return ph.count + floor_rat(Rat(lr.hi) / lt.lo);
  };
  u64 lo = t_a, hi = engine.t_cap() - 1;
  u64 scan_hi;
  if (upper_count(hi) >= Int(N)) {
    scan_hi = hi;  // the bound never ruled anything out; scan the full bracket
  } else {
    while (hi - lo > 1) {
      u64 mid = lo + (hi - lo) / 2;
      if (upper_count(mid) < Int(N)) hi = mid;
      else lo = mid;
    }
    scan_hi = hi - 1;  // the bound is non-increasing in t: t >= hi is impossible
  }
  if (scan_hi <= t_a) return {t_a, std::move(cert_a)};

  // descending exhaustive scan over (t_a, scan_hi]
  std::atomic<u64> best{t_a};
  u64 span = scan_hi - t_a;
  unsigned nt = std::max(1u, threads);
  u64 chunk = (span + nt - 1) / nt;
  std::vector<u64> results(nt, 0);
  auto worker = [&](unsigned w) {
    u64 chunk_hi = scan_hi - w * chunk;
    u64 chunk_lo = chunk_hi > chunk ? chunk_hi - chunk : 0;
    if (chunk_hi <= t_a) return;
    chunk_lo = std::max(chunk_lo, t_a);
    u64 found = 0;
    for (u64 t = chunk_hi; t > chunk_lo; --t) {
      if (best.load(std::memory_order_relaxed) >= chunk_hi) break;  // a higher chunk won
      Int cnt = detail::robust_count(engine, t, cfg, table);
      if (cnt >= Int(N)) {
        found = t;
        break;
      }
    }
    results[w] = found;
    if (found) {
      u64 cur = best.load();
      while (found > cur && !best.compare_exchange_weak(cur, found)) {}
    }
  };
  if (nt == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nt; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }
  // deterministic reduction: highest chunk with a hit wins; inside a chunk
  // the first (largest) hit was taken
  u64 t1 = t_a;
  for (unsigned w = 0; w < nt; ++w) t1 = std::max(t1, results[w]);
  Certificate cert;
  if (t1 == t_a) cert = std::move(cert_a);
  else detail::robust_count(engine, t1, cfg, table, &cert);
  return {t1, std::move(cert)};
}

// Hint chains: the covering (N, t) pairs with t = t1(N) and next N = 3 t1(N).
enum class HintMode { generate, verify };

struct HintChainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::vector<std::pair<u64, u64>> hint_chain(
    u64 N_start, u64 N_end, HintMode mode, const PrimeTable& table,
    const std::vector<std::pair<u64, u64>>& hints = {}, unsigned threads = 1) {
  if (mode == HintMode::generate) {
    std::vector<std::pair<u64, u64>> out;
    u64 N = N_start;
    while (N <= N_end) {
      auto [t1, cert] = t1_exhaustive(N, threads, table, N_end * 2 + 16);
      if (t1 <= (N + 2) / 3)
        throw HintChainError("t1(" + std::to_string(N) + ") = " + std::to_string(t1) +
                             " does not exceed ceil(N/3); chain cannot advance");
      out.emplace_back(N, t1);
      N = 3 * t1;
    }
    return out;
  }
  // verify mode
  if (hints.empty()) throw HintChainError("verify mode requires hint pairs");
  GreedyConfig cfg;
  for (size_t i = 0; i < hints.size(); ++i) {
    auto [N, t] = hints[i];
    if (3 * t < N) throw HintChainError("pair (" + std::to_string(N) + "," + std::to_string(t) +
                                        ") has t below ceil(N/3)");
    Certificate cert = greedy_subfactorization(N, t, cfg, table);
    auto rep = verify_subfactorization(cert, table);
    if (!rep.accepted)
      throw HintChainError("greedy at (" + std::to_string(N) + "," + std::to_string(t) +
                           ") yields only " + rep.count.str() + " factors");
    if (i + 1 < hints.size() && 3 * t < hints[i + 1].first)
      throw HintChainError("chain gap: interval (" + std::to_string(3 * t) + "," +
                           std::to_string(hints[i + 1].first) + ") uncovered");
  }
  return hints;
}

}  // namespace egs
