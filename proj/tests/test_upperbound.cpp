#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "egs/linprog.hpp"
#include "egs/upperbound.hpp"

using namespace egs;

namespace {
const PrimeTable& table() {
  static PrimeTable t(20'000);
  return t;
}
}  // namespace

TEST_CASE("f_alpha point values") {
  REQUIRE(f_alpha(Rat(1), Rat(1, 2)).contains(Rat(0)));      // ceil(2)/2 = 1
  REQUIRE(f_alpha(e_ri(), Rat(1)).contains(Rat(1)));         // floor(1) log e
  // alpha=3, x=0.3: floor(1/x)=3, 1/(alpha x)=10/9, ceil=2: 3 log(2/(10/9)) = 3 log(9/5)
  RI v = f_alpha(Rat(3), Rat(3, 10));
  RI expect = log_ri(Rat(9, 5), 96) * Rat(3);
  REQUIRE(v.intersects(expect));
  // higher-precision evaluation stays inside a wider one
  RI coarse = f_alpha(Rat(3), Rat(3, 10), 40);
  RI fine = f_alpha(Rat(3), Rat(3, 10), 120);
  REQUIRE(coarse.contains(fine));
}

TEST_CASE("f_alpha respects the envelope 0 <= f <= alpha") {
  std::mt19937_64 rng(42);
  for (int it = 0; it < 400; ++it) {
    Rat alpha(1 + rng() % 50, 1 + rng() % 10);
    Rat x(1 + rng() % 1000, 1 + rng() % 1000);
    RI f = f_alpha(alpha, x);
    REQUIRE(f.hi >= 0);
    REQUIRE(f.lo <= alpha);
    // tighter envelope log(1 + alpha x)/x
    RI env = log_ri(1 + alpha * x, 80) / x;
    REQUIRE(f.lo <= env.hi);
  }
}

TEST_CASE("f_alpha piece decomposition integrates correctly") {
  // integral of f_1 over [1/3, 1]: on [1/3,1/2) f = 2 log 2x... cross-check
  // against a midpoint Riemann refinement
  Rat lo(1, 3), hi(1);
  auto desc = f_alpha_pieces(Rat(1), lo, hi, 80);
  RI total = desc.integral();
  double riemann = 0;
  int n = 40000;
  for (int i = 0; i < n; ++i) {
    Rat x = lo + (hi - lo) * Rat(2 * i + 1, 2 * n);
    riemann += f_alpha(Rat(1), x, 48).mid().convert_to<double>();
  }
  riemann *= ((hi - lo) / n).convert_to<double>();
  REQUIRE(std::abs(total.mid().convert_to<double>() - riemann) < 2e-4);
  // pieces are contiguous and their descriptor spans the domain
  REQUIRE(desc.domain_lo() == lo);
  REQUIRE(desc.domain_hi() == hi);
  for (size_t i = 0; i + 1 < desc.pieces.size(); ++i)
    REQUIRE(desc.pieces[i].hi == desc.pieces[i + 1].lo);
}

TEST_CASE("criterion is too weak at N=9 t=4 but fires in the N/e regime") {
  PrimeTable t9(20);
  REQUIRE_FALSE(upper_crit_test(9, 4, CritMode::exact_sieve, t9));
  PrimeTable t5k(5001);
  REQUIRE(upper_crit_test(5000, 1840, CritMode::exact_sieve, t5k));  // ceil(5000/e)
}

TEST_CASE("best_upper dominates the exact t(N) and obeys the N=80 example") {
  PrimeTable t230(230);
  UpperBoundEngine e80(80, t230);
  u64 b80 = e80.best_upper();
  REQUIRE(Rat(b80) < Rat(80) / e_ri().lo + 1);
  for (u64 N : {100ull, 200ull}) {
    u64 bu = best_upper(N, table());
    u64 tn = t_exact(N, table());
    INFO("N=" << N << " best_upper=" << bu << " t(N)=" << tn);
    REQUIRE(bu >= tn);
  }
}

TEST_CASE("sieve and analytic modes never disagree when both certify") {
  UpperBoundEngine eng(2000, table());
  for (u64 t = 600; t <= 1000; t += 7) {
    bool a = eng.crit_test(t, CritMode::analytic);
    bool s = eng.crit_test(t, CritMode::exact_sieve);
    if (a) REQUIRE(s);  // analytic certifies only a subset
  }
}

TEST_CASE("upper criterion certifies above every verified lower bound") {
  // cross-module consistency: a certified upper test at (N, t) means no
  // verified lower-bound certificate can reach count >= N at t' >= t
  GreedyConfig cfg;
  for (u64 N : {500ull, 3000ull}) {
    UpperBoundEngine eng(N, table());
    auto [tg, cert] = search_t(N, SearchStrategy::heuristic, GreedyConfig::Variant::standard,
                               table());
    for (u64 t = tg; t <= tg + 40; ++t)
      if (eng.crit_test(t)) {
        REQUIRE(t > tg);
        break;
      }
  }
}

TEST_CASE("tne scan passes at the endpoints and records margins") {
  PrimeTable t5k(5001);
  auto rep = tne_scan(80, 120, t5k);
  REQUIRE(rep.all_pass);
  auto [N0, lhs0, rhs0] = rep.rows.front();
  REQUIRE(N0 == 80);
  REQUIRE(lhs0 > rhs0);
  auto single = tne_scan(5000, 5000, t5k);
  REQUIRE(single.all_pass);
  auto [N1, lhs1, rhs1] = single.rows.front();
  REQUIRE(lhs1 - rhs1 > 0);  // margin recorded
}
