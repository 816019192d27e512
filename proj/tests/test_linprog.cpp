#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "egs/linprog.hpp"

using namespace egs;

namespace {
const PrimeTable& table() {
  static PrimeTable t(10'000);
  return t;
}

// Independent oracle: maximal t-admissible multiset from the J columns by
// straight recursive enumeration over nondecreasing column indices.
Int brute_M(u64 N, u64 t, const PrimeTable& tab) {
  auto js = j_column_set(N, t, tab);
  std::vector<std::vector<std::pair<size_t, u64>>> fac(js.size());
  std::vector<u64> primes;
  for (u64 p : tab.primes()) {
    if (p > N) break;
    primes.push_back(p);
  }
  for (size_t k = 0; k < js.size(); ++k)
    for (auto [p, e] : factorize(js[k], tab)) {
      size_t idx = std::lower_bound(primes.begin(), primes.end(), p) - primes.begin();
      fac[k].emplace_back(idx, e);
    }
  std::vector<i64> residual(primes.size());
  for (size_t i = 0; i < primes.size(); ++i)
    residual[i] = static_cast<i64>(legendre_valuation(N, primes[i]));
  Int best = 0;
  std::function<void(size_t, Int)> rec = [&](size_t from, Int depth) {
    if (depth > best) best = depth;
    for (size_t k = from; k < js.size(); ++k) {
      bool ok = true;
      for (auto [i, e] : fac[k])
        if (residual[i] < static_cast<i64>(e)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      for (auto [i, e] : fac[k]) residual[i] -= static_cast<i64>(e);
      rec(k, depth + 1);
      for (auto [i, e] : fac[k]) residual[i] += static_cast<i64>(e);
    }
  };
  rec(0, 0);
  return best;
}
}  // namespace

TEST_CASE("J column sets") {
  auto j45 = j_column_set(5, 4, table());
  REQUIRE(j45 == std::vector<Int>{4, 5, 6, 9});
  LPModel m = build_model(5, 4, ColumnPolicy::J_set, table());
  REQUIRE(m.cols.size() == 4);
  REQUIRE(m.row_primes == std::vector<u64>{2, 3, 5});
}

TEST_CASE("interval policy at N=9 t=3 has columns 3..9") {
  LPModel m = build_model(9, 3, ColumnPolicy::interval, table());
  REQUIRE(m.cols.size() == 7);
  REQUIRE(m.cols.front().value == 3);
  REQUIRE(m.cols.back().value == 9);
  LPSolution s = solve_lp(m, table());
  REQUIRE(s.status == LPSolution::Status::optimal);
  REQUIRE(s.objective >= 9);
  REQUIRE(s.has_dual_cert);
}

TEST_CASE("smooth model at N=1e4 has pi(sqrt(N)) rows") {
  LPModel m = build_model(10'000, 3400, ColumnPolicy::smooth, table());
  REQUIRE(m.row_primes.size() == 25);  // pi(100)
}

TEST_CASE("LP relaxation value for 9! at t=4 refutes t(9) >= 4") {
  LPModel m = build_model(9, 4, ColumnPolicy::J_set, table());
  LPSolution s = solve_lp(m, table());
  REQUIRE(s.status == LPSolution::Status::optimal);
  REQUIRE(s.has_dual_cert);
  REQUIRE(s.objective < 9);
  REQUIRE(s.dual_report.bound_implied.find("t(9) < 4") != std::string::npos);
}

TEST_CASE("ip_exact matches brute force for N <= 12, all t") {
  for (u64 N : {5ull, 8ull, 9ull, 12ull}) {
    for (u64 t = 2; t <= N; ++t) {
      IPResult r = ip_exact(N, t, table());
      REQUIRE(r.exact);
      INFO("N=" << N << " t=" << t);
      REQUIRE(r.lower == brute_M(N, t, table()));
    }
  }
}

TEST_CASE("t_exact pins the sequence anchors") {
  REQUIRE(t_exact(9, table()) == 3);
  REQUIRE(t_exact(14, table()) == 4);
  // first values: 1,1,1,2,2,2,2,2,3,3,3,3,3,4
  std::vector<u64> first14 = {1, 1, 1, 2, 2, 2, 2, 2, 3, 3, 3, 3, 3, 4};
  for (u64 N = 1; N <= 14; ++N) REQUIRE(t_exact(N, table()) == first14[N - 1]);
}

TEST_CASE("ip_exact is non-increasing in t and t_exact non-decreasing in N") {
  for (u64 N : {20ull, 40ull}) {
    Int prev(-1);
    for (u64 t = 2; t <= N / 2 + 1; ++t) {
      IPResult r = ip_exact(N, t, table());
      REQUIRE(r.exact);
      if (prev >= 0) REQUIRE(r.lower <= prev);
      prev = r.lower;
    }
  }
  u64 prev_t = 1;
  for (u64 N = 4; N <= 40; ++N) {
    u64 tn = t_exact(N, table());
    REQUIRE(tn >= prev_t);
    prev_t = tn;
  }
}

TEST_CASE("floor+residuals certificates verify and match exact value at N=9") {
  Certificate c = floor_residuals_lower(9, 3, table());
  auto rep = verify_subfactorization(c, table());
  REQUIRE(rep.accepted);
  REQUIRE(rep.count >= 9);
}

TEST_CASE("aggregated and direct interval models have the same exact LP value") {
  for (u64 N : {700ull, 1200ull}) {
    u64 t = N / 3;
    LPModel agg = build_model(N, t, ColumnPolicy::interval, table());
    REQUIRE(!agg.groups.empty());
    LPModel direct = build_model(N, t, ColumnPolicy::interval, table(), 3'000'000, true);
    REQUIRE(direct.groups.empty());
    LPSolution sa = solve_lp(agg, table());
    LPSolution sd = solve_lp(direct, table());
    INFO("N=" << N);
    REQUIRE(sa.objective == sd.objective);
    REQUIRE(sa.has_dual_cert);
    REQUIRE(sd.has_dual_cert);
  }
}

TEST_CASE("weak duality: greedy certificates never exceed verified dual floors") {
  std::mt19937_64 rng(20240809);
  GreedyConfig cfg;
  for (int it = 0; it < 12; ++it) {
    u64 N = 30 + rng() % 470;
    u64 t = std::max<u64>(2, N / 5 + rng() % (N / 3));
    if (2 * t > N) t = N / 2;
    Certificate c = greedy_subfactorization(N, t, cfg, table());
    auto rep = verify_subfactorization(c, table());
    LPModel m = build_model(N, t, ColumnPolicy::J_set, table());
    LPSolution s = solve_lp(m, table());
    if (!s.has_dual_cert) continue;
    INFO("N=" << N << " t=" << t);
    REQUIRE(rep.count <= floor_rat(s.objective));
  }
}

TEST_CASE("export and import round trip") {
  LPModel m = build_model(5, 4, ColumnPolicy::J_set, table());
  std::ostringstream os;
  export_model(m, os);
  std::istringstream is(os.str());
  LPModel back = import_model(is);
  REQUIRE(back.rhs == m.rhs);
  REQUIRE(back.row_primes == m.row_primes);
  REQUIRE(back.cols.size() == m.cols.size());
  for (size_t j = 0; j < m.cols.size(); ++j) REQUIRE(back.cols[j].a == m.cols[j].a);
}
