#include <catch2/catch_amalgamated.hpp>

#include "egs/interval.hpp"

using namespace egs;

namespace {
Rat approx(const char* s) { return rat_from_string(s); }
}

TEST_CASE("dyadic rounding is outward and bounded") {
  Rat q(355, 113);
  Rat dn = dyadic_round_down(q, 40), up = dyadic_round_up(q, 40);
  REQUIRE(dn <= q);
  REQUIRE(up >= q);
  REQUIRE(up - dn < Rat(1, Int(1) << 30));
  Rat neg = -q;
  REQUIRE(dyadic_round_down(neg, 40) <= neg);
  REQUIRE(dyadic_round_up(neg, 40) >= neg);
}

TEST_CASE("cached constants enclose known digits") {
  // log 2 = 0.6931471805599453...
  REQUIRE(log2_ri().gt(approx("6931471805599453/10000000000000000")));
  REQUIRE(log2_ri().lt(approx("6931471805599454/10000000000000000")));
  REQUIRE(log2_ri().width() < Rat(1, Int(1) << 200));
  // pi = 3.14159265358979...
  RI pi = pi_ri();
  REQUIRE(pi.gt(Rat(314159265, 100000000)));
  REQUIRE(pi.lt(Rat(314159266, 100000000)));
  // e = 2.718281828459045...
  RI e = e_ri();
  REQUIRE(e.gt(Rat(2718281828ll, 1000000000ll)));
  REQUIRE(e.lt(Rat(2718281829ll, 1000000000ll)));
}

TEST_CASE("log enclosures") {
  RI l10 = log_ri(Rat(10));
  REQUIRE(l10.gt(Rat(23025850, 10000000)));
  REQUIRE(l10.lt(Rat(23025851, 10000000)));
  REQUIRE(log_ri(Rat(1)).contains(Rat(0)));
  // log(4/3) = 0.287682072...
  RI l43 = log_ri(Rat(4, 3));
  REQUIRE(l43.gt(Rat(287682072, 1000000000)));
  REQUIRE(l43.lt(Rat(287682073, 1000000000)));
  // huge rational argument still works
  RI big = log_ri(Rat(Int(1) << 200, Int(3)));
  RI expect = log2_ri() * Rat(200) - log_ri(Rat(3));
  REQUIRE(big.intersects(expect));
}

TEST_CASE("exp enclosures and exp(log) round trip") {
  RI e1 = exp_ri(Rat(1));
  REQUIRE(e1.intersects(e_ri()));
  RI em = exp_ri(Rat(-3, 2));
  // e^-1.5 = 0.22313016...
  REQUIRE(em.gt(Rat(22313016, 100000000)));
  REQUIRE(em.lt(Rat(22313017, 100000000)));
  for (int k : {2, 7, 100, 12345}) {
    RI l = log_ri(Rat(k));
    RI back = exp_ri(l);
    REQUIRE(back.contains(Rat(k)));
  }
}

TEST_CASE("sqrt enclosures") {
  RI s2 = sqrt_ri(Rat(2));
  REQUIRE(s2.gt(Rat(14142135, 10000000)));
  REQUIRE(s2.lt(Rat(14142136, 10000000)));
  REQUIRE(sqrt_ri(Rat(49)).contains(Rat(7)));
  REQUIRE(sqrt_ri(Rat(0)).contains(Rat(0)));
}

TEST_CASE("interval arithmetic basics") {
  RI a(Rat(1), Rat(2)), b(Rat(-1), Rat(3));
  RI p = a * b;
  REQUIRE(p.lo == Rat(-2));
  REQUIRE(p.hi == Rat(6));
  REQUIRE_THROWS_AS(inv(b), std::domain_error);
  REQUIRE((a / Rat(2)).contains(Rat(3, 4)));
  REQUIRE(pos_part(b).lo == Rat(0));
  REQUIRE(abs_ri(b).hi == Rat(3));
}

TEST_CASE("accumulating sum stays outward") {
  RISum s(64);
  Rat exact(0);
  for (int k = 1; k <= 1000; ++k) {
    s.add(log_ri(Rat(k + 1, k), 64));
    exact += 0;  // running exact value is log(k+1)
  }
  RI total = s.value();
  REQUIRE(total.contains(log_ri(Rat(1001)).mid()));
  REQUIRE(total.width() < Rat(1, Int(1) << 40));
}
