#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "egs/certify.hpp"

using namespace egs;

namespace {
const PrimeTable& table50k() {
  static PrimeTable t(50'000);
  return t;
}

Certificate nine_factorization() {
  Certificate c;
  c.N = 9;
  c.t = 3;
  // {3,3,3,3,4,4,5,7,8}
  c.explicit_factors = {{4, 3}, {2, 4}, {1, 5}, {1, 7}, {1, 8}};
  return c;
}
}  // namespace

TEST_CASE("greedy-style subfactorization of 9! is accepted at t=3") {
  Certificate c;
  c.N = 9;
  c.t = 3;
  c.explicit_factors = {{1, 7}, {1, 5}, {4, 3}, {3, 4}};
  auto rep = verify_subfactorization(c, table50k());
  REQUIRE(rep.accepted);
  REQUIRE(rep.count == 9);
  REQUIRE(rep.min_factor == 3);
  REQUIRE(rep.bound_implied == "t(9) >= 3");
}

TEST_CASE("exact factorization of 9! is accepted") {
  auto rep = verify_subfactorization(nine_factorization(), table50k());
  REQUIRE(rep.accepted);
  REQUIRE(rep.count == 9);
}

TEST_CASE("no 9-element 4-admissible multiset passes at t=4") {
  // product 4^5*5*7*8*9 > 9! so some prime must overdraw
  Certificate c;
  c.N = 9;
  c.t = 4;
  c.explicit_factors = {{5, 4}, {1, 5}, {1, 7}, {1, 8}, {1, 9}};
  auto rep = verify_subfactorization(c, table50k());
  REQUIRE_FALSE(rep.accepted);
  REQUIRE_FALSE(rep.violations.empty());
}

TEST_CASE("admissibility is monotone in t") {
  auto c = nine_factorization();
  for (u64 t : {1, 2, 3}) {
    c.t = t;
    REQUIRE(verify_subfactorization(c, table50k()).accepted);
  }
}

TEST_CASE("structural rejection names the malformed block") {
  Certificate c;
  c.N = 100;
  c.t = 30;
  c.prime_blocks.push_back({Int(1), 50, 40, Int(1)});
  auto rep = verify_subfactorization(c, table50k());
  REQUIRE_FALSE(rep.accepted);
  REQUIRE(rep.reason.find("block 0") != std::string::npos);
  c.prime_blocks[0] = {Int(1), 20, 40, Int(1)};  // m*p_min = 20 < t
  rep = verify_subfactorization(c, table50k());
  REQUIRE_FALSE(rep.accepted);
  REQUIRE(rep.reason.find("below t") != std::string::npos);
}

TEST_CASE("prime block counting via pi") {
  Certificate c;
  c.N = 100;
  c.t = 31;
  c.prime_blocks.push_back({Int(1), 31, 97, Int(1)});
  auto rep = verify_subfactorization(c, table50k());
  REQUIRE(rep.count == Int(table50k().pi(97) - table50k().pi(30)));
  REQUIRE_FALSE(rep.accepted);  // count < N: not proven, not an error
  REQUIRE(rep.bound_implied.find("M(100,31) >=") != std::string::npos);
}

TEST_CASE("block overdraft detected") {
  Certificate c;
  c.N = 100;
  c.t = 40;
  // primes in [53, 97] twice each: nu_p(100!) = 1 there
  c.prime_blocks.push_back({Int(1), 53, 97, Int(2)});
  auto rep = verify_subfactorization(c, table50k());
  REQUIRE_FALSE(rep.accepted);
  REQUIRE_FALSE(rep.violations.empty());
  REQUIRE(rep.violations.front().second == 1);
}

TEST_CASE("dual certificate: zero weights rejected") {
  DualCertificate d;
  d.N = 9;
  d.t = 3;
  auto rep = verify_dual(d, table50k());
  REQUIRE_FALSE(rep.accepted);
  REQUIRE(rep.reason.find("j=3") != std::string::npos);
}

TEST_CASE("dual certificate: all-one weights verify and bound M(9,4)") {
  DualCertificate d;
  d.N = 9;
  d.t = 4;
  d.weights = {{2, Rat(1)}, {3, Rat(1)}, {5, Rat(1)}, {7, Rat(1)}};
  auto rep = verify_dual(d, table50k());
  REQUIRE(rep.accepted);
  REQUIRE(rep.count == 13);  // nu_2 + nu_3 + nu_5 + nu_7 of 9!
}

TEST_CASE("dual certificate: monotonicity violation is named") {
  DualCertificate d;
  d.N = 20;
  d.t = 5;
  d.weights = {{2, Rat(1)}, {3, Rat(1, 2)}, {5, Rat(1)}, {7, Rat(1)}, {11, Rat(1)},
               {13, Rat(1)}, {17, Rat(1)}, {19, Rat(1)}};
  auto rep = verify_dual(d, table50k());
  REQUIRE_FALSE(rep.accepted);
  REQUIRE(rep.reason.find("weakly increasing") != std::string::npos);
}

TEST_CASE("certificate io round trip") {
  auto c = nine_factorization();
  c.prime_blocks.push_back({Int(2), 11, 31, Int(3)});
  std::ostringstream os;
  write_certificate(os, c);
  std::istringstream is(os.str());
  auto back = std::get<Certificate>(read_certificate(is));
  REQUIRE(back.N == c.N);
  REQUIRE(back.t == c.t);
  REQUIRE(back.explicit_factors == c.explicit_factors);
  REQUIRE(back.prime_blocks.size() == c.prime_blocks.size());
  std::ostringstream os2;
  write_certificate(os2, back);
  REQUIRE(os.str() == os2.str());
}

TEST_CASE("dual io round trip keeps rationals exact") {
  DualCertificate d;
  d.N = 43631;
  d.t = 14544;
  d.weights = {{2, Rat(1, 3)}, {3, Rat(47, 1257)}};
  std::ostringstream os;
  write_certificate(os, d);
  std::istringstream is(os.str());
  auto back = std::get<DualCertificate>(read_certificate(is));
  REQUIRE(back.weights[0].second == Rat(1, 3));
  REQUIRE(back.weights[1].second == Rat(47, 1257));
}

TEST_CASE("parse errors carry line numbers") {
  std::istringstream is("EGS-CERT v1\nN 9\nt 3\nQ 1 2\n");
  REQUIRE_THROWS_WITH(read_certificate(is), Catch::Matchers::ContainsSubstring("line 4"));
  std::istringstream is2("EGS-DUAL v1\nN 9\nt 3\nW 2 0.5\n");
  REQUIRE_THROWS_WITH(read_certificate(is2), Catch::Matchers::ContainsSubstring("floating"));
}

TEST_CASE("a range block line counts factors through pi") {
  PrimeTable t(43700);
  std::istringstream is("EGS-CERT v1\nN 43631\nt 14544\nP 1 14544 43631 1\n");
  auto c = std::get<Certificate>(read_certificate(is));
  REQUIRE(c.count(t) == Int(t.pi(43631) - t.pi(14543)));
}
