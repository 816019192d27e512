#pragma once

#include <algorithm>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "egs/ntheory.hpp"

namespace egs {

// Trial-division factorization using a prime table; n must satisfy
// n <= table.limit()^2 so any cofactor left after the scan is prime.
inline std::vector<std::pair<u64, u64>> factorize(Int n, const PrimeTable& table) {
  if (n <= 0) throw std::invalid_argument("factorize requires n >= 1");
  std::vector<std::pair<u64, u64>> out;
  for (u64 p : table.primes()) {
    if (Int(p) * p > n) break;
    u64 e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) {
    if (n > Int(table.limit()) * Int(table.limit()))
      throw std::out_of_range("factorize: residual cofactor beyond certified range");
    out.emplace_back(to_u64(n), 1);
  }
  return out;
}

// Compressed t-admissible subfactorization of N!: explicit factors plus
// prime-range blocks, where a block (m, p_min, p_max, e) denotes e copies of
// m*p for every prime p in [p_min, p_max].
struct Certificate {
  u64 N = 0;
  u64 t = 0;
  std::vector<std::pair<Int, Int>> explicit_factors;  // (multiplicity, factor)
  struct Block {
    Int m;
    u64 p_min = 0, p_max = 0;
    Int e;
  };
  std::vector<Block> prime_blocks;

  Int count(const PrimeTable& table) const {
    Int c = 0;
    for (const auto& [mult, f] : explicit_factors) c += mult;
    for (const auto& b : prime_blocks)
      c += b.e * Int(table.pi(b.p_max) - table.pi(b.p_min - 1));
    return c;
  }
};

// Exact-rational dual certificate: weights w_p (ascending p) proving an
// upper bound on the LP relaxation of M(N, t).
struct DualCertificate {
  u64 N = 0;
  u64 t = 0;
  std::vector<std::pair<u64, Rat>> weights;  // ascending primes, w_p >= 0
  Rat claimed_value = 0;                     // optional; 0 when absent
};

struct VerificationReport {
  bool accepted = false;
  Int count = 0;
  Int min_factor = 0;
  std::string bound_implied;
  std::string reason;  // empty when accepted
  // primes where the certificate overdraws N! (p, deficit) — empty if none
  std::vector<std::pair<u64, Int>> violations;
};

namespace detail {

// Valuations consumed by cofactors and explicit factors (block range primes
// handled separately by the sweep).
struct ConsumptionMap {
  std::map<u64, Int> consumed;
  void add(const std::vector<std::pair<u64, u64>>& fac, const Int& copies) {
    for (const auto& [p, e] : fac) consumed[p] += copies * Int(e);
  }
};

}  // namespace detail

// Checks that `cert` encodes a t-admissible subfactorization of N! with the
// claimed structure.  Accepted implies t(N) >= t when count >= N.
// Valuations are streamed per block over elementary prime ranges; the
// certificate is never expanded into individual factors.
inline VerificationReport verify_subfactorization(const Certificate& cert,
                                                  const PrimeTable& table) {
  VerificationReport rep;
  if (table.limit() < cert.N) {
    rep.reason = "prime table does not cover N";
    return rep;
  }
  const Int target_t(cert.t);

  // Structural checks + consumption from explicit factors and cofactors.
  detail::ConsumptionMap cm;
  Int count = 0;
  Int min_factor = 0;
  auto note_factor = [&](const Int& f) {
    if (min_factor == 0 || f < min_factor) min_factor = f;
  };
  for (size_t i = 0; i < cert.explicit_factors.size(); ++i) {
    const auto& [mult, f] = cert.explicit_factors[i];
    if (mult <= 0 || f <= 0) {
      rep.reason = "explicit factor line " + std::to_string(i) + " malformed";
      return rep;
    }
    if (f < target_t) {
      rep.reason = "explicit factor " + f.str() + " below t";
      return rep;
    }
    note_factor(f);
    cm.add(factorize(f, table), mult);
    count += mult;
  }

  // Events for the elementary-range sweep over block primes.
  struct Event {
    u64 x;
    Int delta;
  };
  std::vector<Event> events;
  for (size_t i = 0; i < cert.prime_blocks.size(); ++i) {
    const auto& b = cert.prime_blocks[i];
    if (b.m <= 0 || b.e <= 0 || b.p_min < 2 || b.p_min > b.p_max || b.p_max > cert.N) {
      rep.reason = "block " + std::to_string(i) + " malformed";
      return rep;
    }
    if (b.m * Int(b.p_min) < target_t) {
      rep.reason = "block " + std::to_string(i) + " has m*p_min below t";
      return rep;
    }
    u64 cnt = table.pi(b.p_max) - table.pi(b.p_min - 1);
    count += b.e * Int(cnt);
    if (cnt > 0) note_factor(b.m * Int(table.next_prime(b.p_min - 1)));
    cm.add(factorize(b.m, table), b.e * Int(cnt));
    events.push_back({b.p_min, b.e});
    events.push_back({b.p_max + 1, -b.e});
  }

  // Per-prime budget check for map-consumed primes (includes any prime that
  // also lies inside block ranges: collect range contribution at that prime).
  auto range_copies_at = [&](u64 p) {
    Int tot = 0;
    for (const auto& b : cert.prime_blocks)
      if (b.p_min <= p && p <= b.p_max) tot += b.e;
    return tot;
  };
  for (const auto& [p, c] : cm.consumed) {
    Int total = c + range_copies_at(p);
    Int budget(p > cert.N ? 0 : legendre_valuation(cert.N, p));
    if (total > budget) rep.violations.emplace_back(p, total - budget);
  }

  // Sweep elementary ranges; within a range the total block multiplicity is
  // constant and nu_p(N!) is non-increasing in p, so the range minimum is at
  // the largest prime in the range.
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.x < b.x; });
  Int active = 0;
  for (size_t i = 0; i < events.size();) {
    u64 x = events[i].x;
    while (i < events.size() && events[i].x == x) active += events[i++].delta;
    if (active == 0 || i == events.size()) continue;
    u64 next_x = events[i].x;
    u64 hi = std::min(next_x - 1, cert.N);
    if (x > hi) continue;
    u64 pmax = table.prev_prime(hi);
    if (pmax < x) continue;  // no prime in the elementary range
    Int budget(legendre_valuation(cert.N, pmax));
    if (active > budget) {
      // locate the precise violator for the report
      for (u64 pp = pmax;;) {
        Int extra = 0;
        auto it = cm.consumed.find(pp);
        if (it != cm.consumed.end()) extra = it->second;
        if (active + extra > Int(legendre_valuation(cert.N, pp))) {
          rep.violations.emplace_back(pp, active + extra - Int(legendre_valuation(cert.N, pp)));
          break;
        }
        u64 prev = table.prev_prime(pp - 1);
        if (prev < x) break;
        pp = prev;
      }
    } else {
      // map-consumed primes inside the range were already charged with
      // range_copies_at above
    }
  }

  rep.count = count;
  rep.min_factor = min_factor;
  if (!rep.violations.empty()) {
    std::ostringstream os;
    os << "valuation overdraft at p=" << rep.violations.front().first;
    rep.reason = os.str();
    return rep;
  }
  if (count < cert.N) {
    rep.reason = "only " + count.str() + " factors, need N";
    rep.bound_implied = "M(" + std::to_string(cert.N) + "," + std::to_string(cert.t) +
                        ") >= " + count.str();
    return rep;
  }
  rep.accepted = true;
  rep.bound_implied = "t(" + std::to_string(cert.N) + ") >= " + std::to_string(cert.t);
  return rep;
}

// Exact verification of a dual certificate: non-negative weakly increasing
// weights with sum_p w_p nu_p(j) >= 1 for every integer t <= j <= N.  On
// success the implied bound is M(N,t) <= floor(sum_p w_p nu_p(N!)).
inline VerificationReport verify_dual(const DualCertificate& cert, const PrimeTable& table) {
  VerificationReport rep;
  if (table.limit() < cert.N) {
    rep.reason = "prime table does not cover N";
    return rep;
  }
  if (2 * cert.t > cert.N) {
    rep.reason = "dual verification requires t <= N/2";
    return rep;
  }
  // Monotone over all primes <= N with unlisted weights read as zero.
  {
    Rat prev(0);
    u64 prev_p = 0;
    size_t k = 0;
    for (u64 p : table.primes()) {
      if (p > cert.N) break;
      Rat w(0);
      if (k < cert.weights.size() && cert.weights[k].first == p) w = cert.weights[k++].second;
      else if (k < cert.weights.size() && cert.weights[k].first < p) {
        rep.reason = "weights not listed in ascending prime order near p=" +
                     std::to_string(cert.weights[k].first);
        return rep;
      }
      if (w < 0) {
        rep.reason = "negative weight at p=" + std::to_string(p);
        return rep;
      }
      if (w < prev) {
        rep.reason = "weights not weakly increasing at prime pair (" + std::to_string(prev_p) +
                     "," + std::to_string(p) + ")";
        return rep;
      }
      prev = w;
      prev_p = p;
    }
    if (k < cert.weights.size()) {
      rep.reason = "weight listed for prime beyond N: p=" +
                   std::to_string(cert.weights[k].first);
      return rep;
    }
  }
  // Constraint sum_p w_p nu_p(j) >= 1 for all t <= j <= N, accumulated by
  // sieving multiples of prime powers.
  const u64 lo = cert.t, hi = cert.N;
  std::vector<Rat> acc(hi - lo + 1, Rat(0));
  for (const auto& [p, w] : cert.weights) {
    if (w == 0) continue;
    for (Int q = p; q <= Int(hi); q *= p) {
      u64 qq = to_u64(q);
      u64 start = ((lo + qq - 1) / qq) * qq;
      for (u64 j = start; j <= hi; j += qq) acc[j - lo] += w;
    }
  }
  for (u64 j = lo; j <= hi; ++j) {
    if (acc[j - lo] < 1) {
      rep.reason = "covering constraint fails at j=" + std::to_string(j);
      return rep;
    }
  }
  Rat value(0);
  for (const auto& [p, w] : cert.weights)
    if (w != 0) value += w * Rat(legendre_valuation(cert.N, p));
  rep.accepted = true;
  rep.count = floor_rat(value);
  std::ostringstream os;
  os << "M(" << cert.N << "," << cert.t << ") <= " << rat_to_string(value)
     << " hence <= " << rep.count.str();
  if (value < Rat(cert.N)) os << "; t(" << cert.N << ") < " << cert.t;
  rep.bound_implied = os.str();
  if (cert.claimed_value != 0 && value != cert.claimed_value) {
    rep.accepted = false;
    rep.reason = "claimed value " + rat_to_string(cert.claimed_value) +
                 " differs from verified " + rat_to_string(value);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Text format
//   line 1: "EGS-CERT v1" | "EGS-DUAL v1"
//   "N <N>"  "t <t>"
//   cert body:  "F <mult> <factor>"  |  "P <m> <pmin> <pmax> <e>"
//   dual body:  "W <p> <num>/<den>"  (ascending p)
//   '#' starts a comment; integers are decimal; no floating literals.
// ---------------------------------------------------------------------------

using AnyCertificate = std::variant<Certificate, DualCertificate>;

inline void write_certificate(std::ostream& os, const Certificate& c) {
  os << "EGS-CERT v1\n";
  os << "N " << c.N << "\n";
  os << "t " << c.t << "\n";
  for (const auto& [mult, f] : c.explicit_factors) os << "F " << mult << " " << f << "\n";
  for (const auto& b : c.prime_blocks)
    os << "P " << b.m << " " << b.p_min << " " << b.p_max << " " << b.e << "\n";
}

inline void write_certificate(std::ostream& os, const DualCertificate& c) {
  os << "EGS-DUAL v1\n";
  os << "N " << c.N << "\n";
  os << "t " << c.t << "\n";
  if (c.claimed_value != 0) os << "V " << rat_to_string(c.claimed_value) << "\n";
  for (const auto& [p, w] : c.weights) os << "W " << p << " " << rat_to_string(w) << "\n";
}

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline AnyCertificate read_certificate(std::istream& is) {
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw parse_error("line " + std::to_string(lineno) + ": " + what);
  };
  auto next_line = [&](std::string& out) {
    while (std::getline(is, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      while (!line.empty() && (line.back() == ' ' || line.back() == '\r' || line.back() == '\t'))
        line.pop_back();
      if (line.empty()) continue;
      out = line;
      return true;
    }
    return false;
  };
  std::string header;
  if (!next_line(header)) fail("missing header");
  bool dual;
  if (header == "EGS-CERT v1") dual = false;
  else if (header == "EGS-DUAL v1") dual = true;
  else fail("unknown header '" + header + "'");

  Certificate cert;
  DualCertificate dcert;
  u64* Np = dual ? &dcert.N : &cert.N;
  u64* tp = dual ? &dcert.t : &cert.t;
  bool seenN = false, seent = false;
  std::string l;
  u64 last_weight_prime = 0;
  while (next_line(l)) {
    std::istringstream ss(l);
    std::string tag;
    ss >> tag;
    auto want = [&](bool ok) {
      if (!ok || ss.fail()) fail("malformed '" + tag + "' line");
    };
    if (tag == "N") {
      ss >> *Np;
      want(!ss.fail());
      seenN = true;
    } else if (tag == "t") {
      ss >> *tp;
      want(!ss.fail());
      seent = true;
    } else if (tag == "F") {
      want(!dual);
      std::string ms, fs;
      ss >> ms >> fs;
      want(!ss.fail());
      cert.explicit_factors.emplace_back(Int(ms), Int(fs));
    } else if (tag == "P") {
      want(!dual);
      std::string ms, es;
      u64 pmin, pmax;
      ss >> ms >> pmin >> pmax >> es;
      want(!ss.fail());
      cert.prime_blocks.push_back({Int(ms), pmin, pmax, Int(es)});
    } else if (tag == "W") {
      want(dual);
      u64 p;
      std::string ws;
      ss >> p >> ws;
      want(!ss.fail());
      if (ws.find('.') != std::string::npos) fail("floating literal not permitted");
      if (p <= last_weight_prime) fail("weights must be listed with ascending primes");
      last_weight_prime = p;
      dcert.weights.emplace_back(p, rat_from_string(ws));
    } else if (tag == "V") {
      want(dual);
      std::string vs;
      ss >> vs;
      want(!ss.fail());
      dcert.claimed_value = rat_from_string(vs);
    } else {
      fail("unknown tag '" + tag + "'");
    }
  }
  if (!seenN || !seent) fail("missing N or t line");
  if (dual) return dcert;
  return cert;
}

}  // namespace egs
