#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "egs/ntheory.hpp"

using namespace egs;

namespace {
const PrimeTable& table1e6() {
  static PrimeTable t(1'000'000);
  return t;
}

u64 trial_division_pi(u64 x) {
  u64 c = 0;
  for (u64 n = 2; n <= x; ++n) {
    bool prime = true;
    for (u64 d = 2; d * d <= n; ++d)
      if (n % d == 0) {
        prime = false;
        break;
      }
    if (prime) ++c;
  }
  return c;
}
}  // namespace

TEST_CASE("sieve matches hand counts and trial division") {
  PrimeTable small(10);
  REQUIRE(small.primes() == std::vector<u64>{2, 3, 5, 7});
  REQUIRE(small.pi(10) == 4);
  REQUIRE(table1e6().pi(10'000) == 1229);
  REQUIRE(table1e6().pi(599) == 109);
  REQUIRE(table1e6().pi(10'000) == trial_division_pi(10'000));
  // sampled entries are prime by trial division
  const auto& ps = table1e6().primes();
  for (size_t i = 0; i < ps.size(); i += ps.size() / 37 + 1) {
    u64 p = ps[i];
    for (u64 d = 2; d * d <= p; ++d) REQUIRE(p % d != 0);
  }
  // pi is non-decreasing, pi(limit) = count
  REQUIRE(table1e6().pi(table1e6().limit()) == ps.size());
  REQUIRE_THROWS_AS(PrimeTable(sieve_limit_cap() + 1), resource_error);
}

TEST_CASE("legendre valuation") {
  REQUIRE(legendre_valuation(9, 3) == 4);
  REQUIRE(legendre_valuation(10, 2) == 8);
  REQUIRE(legendre_valuation(9, 11) == 0);
  for (u64 N : {1ull, 6ull, 100ull, 12345ull})
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 97ull})
      REQUIRE(legendre_valuation(N, p) == legendre_valuation_digit_form(N, p));
}

TEST_CASE("factorial log bounds contain exact sums") {
  REQUIRE(factorial_log_bounds(1).contains(Rat(0)));
  for (u64 N : {2ull, 9ull, 100ull, 5000ull}) {
    RISum exact(96);
    for (u64 n = 2; n <= N; ++n) exact.add(log_ri(Rat(n)));
    RI stirling = factorial_log_bounds(N);
    REQUIRE(stirling.intersects(exact.value()));
    REQUIRE(exact.value().intersects(stirling));
    if (N >= 10) REQUIRE(stirling.width() <= Rat(1, 12 * N) + Rat(1, Int("1000000000000")));
  }
}

TEST_CASE("rough count examples and brute force") {
  REQUIRE(rough_count(Rat(0), Rat(6)) == 2);
  REQUIRE(rough_count(Rat(0), Rat(12)) == 4);
  REQUIRE(rough_count(Rat(10), Rat(100)) == 30);
  for (int a = 0; a <= 100; a += 7)
    for (int b = a; b <= a + 200; b += 13) {
      Int brute = 0;
      for (int k = a + 1; k <= b; ++k)
        if (std::gcd(k, 6) == 1) ++brute;
      REQUIRE(rough_count(Rat(a), Rat(b)) == brute);
      // Lemma bound |count - (b-a)/3| <= 4/3
      Rat diff = Rat(rough_count(Rat(a), Rat(b))) - Rat(b - a, 3);
      REQUIRE(diff <= Rat(4, 3));
      REQUIRE(diff >= Rat(-4, 3));
    }
}

TEST_CASE("smooth ceiling basics and exhaustive gap check") {
  REQUIRE(smooth_ceiling(Rat(5)).value == 6);
  REQUIRE(smooth_ceiling(Rat(10)).value == 12);
  REQUIRE(smooth_ceiling(Rat(12)).value == 12);
  REQUIRE_THROWS_AS(smooth_ceiling(Rat(1, 2)), std::domain_error);
  auto smooth = smooth_numbers_upto(Int(4'000'000'000ll));
  std::mt19937_64 rng(12345);
  for (int it = 0; it < 1000; ++it) {
    u64 x = rng() % 1'000'000'000 + 1;
    auto d = smooth_ceiling(Rat(x));
    REQUIRE(d.value >= x);
    // no 3-smooth number in [x, value)
    auto lb = std::lower_bound(smooth.begin(), smooth.end(), Int(x));
    REQUIRE(*lb == d.value);
    // value = 2^n 3^m
    Int v = d.value;
    for (u64 i = 0; i < d.n; ++i) { REQUIRE(v % 2 == 0); v /= 2; }
    for (u64 i = 0; i < d.m; ++i) { REQUIRE(v % 3 == 0); v /= 3; }
    REQUIRE(v == 1);
  }
}

TEST_CASE("anchored smooth ceiling satisfies the approximation inequalities") {
  std::mt19937_64 rng(999);
  RI kappa45 = kappa_bound(Rat(9, 2), KappaMode::table);
  for (int it = 0; it < 200; ++it) {
    u64 x = rng() % 100'000'000 + 10;
    auto d = smooth_ceiling_anchored(Rat(x), Rat(9, 2));
    REQUIRE(Rat(d.value) >= Rat(x));
    // value <= exp(kappa_L) * x
    RI bound = exp_ri(kappa45) * Rat(x);
    REQUIRE(Rat(d.value) <= bound.hi);
    // 12^a <= x / L < 12^(a+1)
    Int p12 = 1;
    for (u64 i = 0; i < d.anchor_a; ++i) p12 *= 12;
    REQUIRE(Rat(p12) <= Rat(x) / Rat(9, 2));
    REQUIRE(Rat(p12 * 12) > Rat(x) / Rat(9, 2));
  }
}

TEST_CASE("kappa bounds: table rows and scan supremum") {
  RI k45 = kappa_bound(Rat(9, 2), KappaMode::table);
  REQUIRE(k45.intersects(log_ri(Rat(4, 3))));
  RI k405 = kappa_bound(Rat(81, 2), KappaMode::table);
  REQUIRE(k405.intersects(log_ri(Rat(32, 27))));
  REQUIRE_THROWS_AS(kappa_bound(Rat(1, 4), KappaMode::table), std::domain_error);
  RI scan = kappa_bound(Rat(9, 2), KappaMode::scan, Rat(1'000'000));
  // the sup over the scan range equals log(4/3), attained just above 4.5 (6 -> 8)
  REQUIRE(scan.intersects(log_ri(Rat(4, 3))));
  // scan lower bound never exceeds the table upper bound
  REQUIRE(scan.lo <= k45.hi);
  // random-x spot check of the defining inequality
  std::mt19937_64 rng(7);
  for (int it = 0; it < 300; ++it) {
    u64 x = rng() % 1'000'000 + 5;
    if (Rat(x) < Rat(9, 2)) continue;
    auto d = smooth_ceiling(Rat(x));
    REQUIRE(log_ri(Rat(d.value, x)).lo <= k45.hi);
  }
}

TEST_CASE("pi bounds containment") {
  const auto& t = table1e6();
  REQUIRE(pi_bounds(Rat(10'000)).contains(Rat(1229)));
  REQUIRE(pi_bounds(Rat(1'000'000)).contains(Rat(78498)));
  REQUIRE(pi_bounds(Rat(2), &t).contains(Rat(1)));
  for (u64 x : {100ull, 599ull, 600ull, 5000ull, 77777ull, 999999ull}) {
    RI b = pi_bounds(Rat(x));
    REQUIRE(b.contains(Rat(t.pi(x))));
  }
}

TEST_CASE("E is nondecreasing and E/x nonincreasing on a grid") {
  Rat prev_e(-1), prev_ratio(0);
  bool first = true;
  for (u64 x = 1500; x <= 200'000'000ull; x *= 3) {
    RI e = E_of(Rat(x));
    if (!first) {
      REQUIRE(e.hi >= prev_e);                 // nondecreasing (up to enclosure)
      REQUIRE(e.lo / Rat(x) <= prev_ratio);    // E(x)/x nonincreasing
    }
    prev_e = e.lo;
    prev_ratio = e.hi / Rat(x);
    first = false;
  }
}

TEST_CASE("prime range bounds contain sieve counts") {
  const auto& t = table1e6();
  u64 actual = t.pi(1'000'000) - t.pi(10'000);
  REQUIRE(actual == 78498 - 1229);
  REQUIRE(pi_range_upper(Rat(10'000), Rat(1'000'000)) >= Rat(actual));
  REQUIRE(pi_range_lower(Rat(10'000), Rat(1'000'000)) <= Rat(actual));
  REQUIRE(pi_range_lower(Rat(10'000), Rat(1'000'000)) > Rat(0));
  REQUIRE_THROWS_AS(pi_range_upper(Rat(100), Rat(1000)), std::domain_error);
}

TEST_CASE("prime sum bounds: indicator and zero function") {
  const auto& t = table1e6();
  // b = 1 on (y, x]: one piece, integral x - y, TV* = 2
  Rat y(10'000), x(1'000'000);
  StepFunctionDescriptor ind;
  ind.pieces.push_back({y, x, RI(Rat(1)), RI(Rat(1)), RI(x - y), true});
  Rat up = prime_sum_bounds(y, x, ind, PrimeSumWeight::unit, BoundDirection::upper);
  Rat lo = prime_sum_bounds(y, x, ind, PrimeSumWeight::unit, BoundDirection::lower);
  u64 actual = t.pi(1'000'000) - t.pi(10'000);
  REQUIRE(up >= Rat(actual));
  REQUIRE(lo <= Rat(actual));
  // zero function
  StepFunctionDescriptor zero;
  zero.pieces.push_back({y, x, RI(Rat(0)), RI(Rat(0)), RI(Rat(0)), true});
  REQUIRE(prime_sum_bounds(y, x, zero, PrimeSumWeight::unit, BoundDirection::upper) == Rat(0));
  // log p weight, indicator: contains actual sum of log p
  RISum slog(80);
  const auto& ps = t.primes();
  for (u64 p : ps)
    if (p > 10'000) slog.add(log_ri(Rat(p), 64));
  Rat up_l = prime_sum_bounds(y, x, ind, PrimeSumWeight::logp, BoundDirection::upper);
  Rat lo_l = prime_sum_bounds(y, x, ind, PrimeSumWeight::logp, BoundDirection::lower);
  REQUIRE(up_l >= slog.value().lo);
  REQUIRE(lo_l <= slog.value().hi);
}
