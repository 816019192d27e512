#pragma once

#include <deque>
#include <iostream>
#include <sstream>

#include "egs/greedy.hpp"
#include "egs/simplex.hpp"

namespace egs {

enum class ColumnPolicy { J_set, interval, smooth };

// LP/IP model of M(N, t): maximize the number of factors subject to the
// valuation capacities of N!.  Large primes q > sqrt(N) appear with
// multiplicity one in any usable factor j = m q, and primes sharing the pair
// (ceil(t/q), floor(N/q)) are interchangeable, so the interval policy
// aggregates them into group rows; groups whose cheapest cofactor is 1
// (q >= t) are presolved away entirely.  Both reductions are exact for the
// LP value.
struct LPModel {
  u64 N = 0, t = 0;
  ColumnPolicy policy = ColumnPolicy::interval;
  std::vector<u64> row_primes;  // rows [0, row_primes.size()) are prime rows
  std::vector<Int> rhs;
  struct Group {
    u64 cof_lo, cof_hi;  // usable cofactors m in [cof_lo, cof_hi]
    u64 q_lo, q_hi;      // prime range
    u64 e;               // per-prime multiplicity floor(N/q)
    u64 prime_count;
  };
  std::vector<Group> groups;  // group g lives in row row_primes.size() + g
  struct Col {
    Int value;       // factor j, or cofactor m for group columns
    int group = -1;  // group index for cofactor columns
    std::vector<std::pair<int, i64>> a;
  };
  std::vector<Col> cols;
  // factors fixed before the LP: presolved q >= t primes (interval policy)
  // or the greedy large-prime phase (smooth policy)
  std::vector<Certificate::Block> base_blocks;
  Int base_count = 0;

  int nrows() const { return static_cast<int>(rhs.size()); }
};

struct lp_build_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace lpdetail {

inline std::vector<std::pair<int, i64>> coeffs_of(Int j, const std::vector<u64>& row_primes,
                                                  const PrimeTable& table) {
  std::vector<std::pair<int, i64>> out;
  auto fac = factorize(j, table);
  for (const auto& [p, e] : fac) {
    auto it = std::lower_bound(row_primes.begin(), row_primes.end(), p);
    if (it == row_primes.end() || *it != p)
      throw std::logic_error("factor prime outside model rows");
    out.emplace_back(static_cast<int>(it - row_primes.begin()), static_cast<i64>(e));
  }
  return out;
}

// all numbers <= X whose prime factors are <= B (ascending not required)
inline void smooth_upto(u64 X, const std::vector<u64>& primes, u64 B, std::vector<u64>& out) {
  std::function<void(size_t, u64)> gen = [&](size_t i, u64 v) {
    out.push_back(v);
    for (size_t k = i; k < primes.size(); ++k) {
      u64 p = primes[k];
      if (p > B || v > X / p) break;
      gen(k, v * p);
    }
  };
  gen(0, 1);
}

}  // namespace lpdetail

// Columns of the exact IP formulation: j >= t dividing N! with no proper
// divisor >= t.  Enumerated as j = s r with s = P_-(j), r < t, P_-(r) >= s.
inline std::vector<Int> j_column_set(u64 N, u64 t, const PrimeTable& table,
                                     size_t ceiling = 2'000'000) {
  if (t < 2) throw std::invalid_argument("J column set requires t >= 2");
  std::vector<Int> out;
  std::vector<u64> spf(t, 0);  // smallest prime factor for r < t
  for (u64 r = 2; r < t; ++r)
    if (!spf[r])
      for (u64 m = r; m < t; m += r)
        if (!spf[m]) spf[m] = r;
  // Note: exponent feasibility against nu_p(N!) is NOT required here (the
  // canonical small example J_{4,5} contains 9 although 9 does not divide
  // 5!); the capacity rows zero such columns, and the dual covering
  // constraints hold for every j >= t, so both bounds stay exact.
  auto primes_small_enough = [&](const Int& j) {
    for (auto [p, e] : factorize(j, table)) {
      (void)e;
      if (p > N) return false;
    }
    return true;
  };
  for (u64 s : table.primes()) {
    if (s > N) break;
    if (s >= t) {
      out.push_back(Int(s));  // bare prime
      continue;
    }
    for (u64 r = std::max<u64>(2, (t + s - 1) / s); r < t; ++r) {
      if (spf[r] && spf[r] < s) continue;
      Int j = Int(s) * Int(r);
      if (primes_small_enough(j)) out.push_back(j);
      if (out.size() > ceiling)
        throw lp_build_error("J column set exceeds ceiling; use the interval policy");
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline LPModel build_model(u64 N, u64 t, ColumnPolicy policy, const PrimeTable& table,
                           size_t column_ceiling = 3'000'000, bool force_direct = false) {
  if (table.limit() < N) throw std::invalid_argument("prime table must cover N");
  if (t > N) throw std::invalid_argument("build_model requires t <= N");
  LPModel model;
  model.N = N;
  model.t = t;
  model.policy = policy;

  if (policy == ColumnPolicy::J_set) {
    for (u64 p : table.primes()) {
      if (p > N) break;
      model.row_primes.push_back(p);
      model.rhs.push_back(Int(legendre_valuation(N, p)));
    }
    for (const Int& j : j_column_set(N, t, table, column_ceiling)) {
      LPModel::Col c;
      c.value = j;
      c.a = lpdetail::coeffs_of(j, model.row_primes, table);
      model.cols.push_back(std::move(c));
    }
    return model;
  }

  if (policy == ColumnPolicy::smooth) {
    GreedyConfig cfg;
    GreedyEngine engine(N, cfg, table);
    auto ph = engine.phase1(t);
    model.base_blocks = std::move(ph.blocks);
    model.base_count = ph.count;
    const auto& sp = engine.small_primes();
    model.row_primes = sp;
    for (size_t i = 0; i < sp.size(); ++i) model.rhs.push_back(Int(ph.residual[i]));
    std::vector<u64> js;
    lpdetail::smooth_upto(N, sp, engine.M(), js);
    std::sort(js.begin(), js.end());
    for (u64 j : js) {
      if (j < t) continue;
      LPModel::Col c;
      c.value = Int(j);
      c.a = lpdetail::coeffs_of(Int(j), model.row_primes, table);
      model.cols.push_back(std::move(c));
      if (model.cols.size() > column_ceiling)
        throw lp_build_error("smooth column set exceeds ceiling");
    }
    return model;
  }

  // interval policy
  u64 S = isqrt_u64(N);
  const bool aggregate = !force_direct && N > 300 && t > S + 1;
  if (!aggregate) {
    for (u64 p : table.primes()) {
      if (p > N) break;
      model.row_primes.push_back(p);
      model.rhs.push_back(Int(legendre_valuation(N, p)));
    }
    for (u64 j = t; j <= N; ++j) {
      LPModel::Col c;
      c.value = Int(j);
      c.a = lpdetail::coeffs_of(Int(j), model.row_primes, table);
      model.cols.push_back(std::move(c));
    }
    return model;
  }

  for (u64 p : table.primes()) {
    if (p > S) break;
    model.row_primes.push_back(p);
    model.rhs.push_back(Int(legendre_valuation(N, p)));
  }
  const int ns = static_cast<int>(model.row_primes.size());

  // presolve primes q in [t, N]: cofactor 1 always optimal; emit blocks
  {
    u64 lo = std::max(t - 1, S);
    while (lo < N) {
      u64 x = lo + 1;
      u64 v = N / x;
      u64 hi = std::min(N, N / v);
      u64 cnt = table.pi(hi) - table.pi(lo);
      if (cnt > 0) {
        u64 qmin = table.next_prime(lo), qmax = table.prev_prime(hi);
        model.base_blocks.push_back({Int(1), qmin, qmax, Int(v)});
        model.base_count += Int(v) * Int(cnt);
      }
      lo = hi;
    }
  }

  // groups for q in (S, t): constant (ceil(t/q), floor(N/q))
  {
    u64 lo = S;
    u64 qmax_all = t - 1;
    while (lo < qmax_all) {
      u64 x = lo + 1;
      u64 a = (t + x - 1) / x;
      u64 b = N / x;
      u64 hi = qmax_all;
      if (a >= 2) hi = std::min(hi, (t + a - 2) / (a - 1) - 1);
      hi = std::min(hi, N / b);
      u64 cnt = table.pi(hi) - table.pi(lo);
      if (cnt > 0) {
        u64 qmin = table.next_prime(lo), qmax = table.prev_prime(hi);
        model.groups.push_back({a, b, qmin, qmax, b, cnt});
        model.rhs.push_back(Int(b) * Int(cnt));
      }
      lo = hi;
    }
  }

  // columns: group cofactors then sqrt(N)-smooth j in [t, N]
  for (size_t g = 0; g < model.groups.size(); ++g) {
    const auto& G = model.groups[g];
    for (u64 m = G.cof_lo; m <= G.cof_hi; ++m) {
      LPModel::Col c;
      c.value = Int(m);
      c.group = static_cast<int>(g);
      c.a = lpdetail::coeffs_of(Int(m), model.row_primes, table);
      c.a.emplace_back(ns + static_cast<int>(g), 1);
      model.cols.push_back(std::move(c));
      if (model.cols.size() > column_ceiling) throw lp_build_error("column ceiling exceeded");
    }
  }
  {
    std::vector<u64> js;
    lpdetail::smooth_upto(N, model.row_primes, S, js);
    std::sort(js.begin(), js.end());
    for (u64 j : js) {
      if (j < t) continue;
      LPModel::Col c;
      c.value = Int(j);
      c.a = lpdetail::coeffs_of(Int(j), model.row_primes, table);
      model.cols.push_back(std::move(c));
      if (model.cols.size() > column_ceiling) throw lp_build_error("column ceiling exceeded");
    }
  }
  return model;
}

struct LPSolution {
  enum class Status { optimal, infeasible };
  Status status = Status::infeasible;
  Rat objective;           // exact M_R(N, t), including presolved factors
  std::vector<Rat> primal; // per model column
  std::vector<Rat> row_duals;
  bool has_dual_cert = false;
  DualCertificate dual;    // assembled full dual (interval / J policies)
  VerificationReport dual_report;
  bool dual_monotone_repaired = false;
  int float_pivots = 0, exact_pivots = 0;
};

// Solve the model exactly (float search + exact polish), assemble the full
// dual certificate, and verify it before reporting; the floor of the
// objective is only trustworthy because the dual passes verify_dual.
inline LPSolution solve_lp(const LPModel& model, const PrimeTable& table,
                           std::vector<Rat>* lower_bounds = nullptr,
                           std::vector<Rat>* upper_bounds = nullptr) {
  std::vector<SxCol> cols(model.cols.size());
  for (size_t j = 0; j < model.cols.size(); ++j) {
    cols[j].a = model.cols[j].a;
    cols[j].obj = 1;
    if (lower_bounds && (*lower_bounds)[j] != 0) cols[j].lo = (*lower_bounds)[j];
    if (upper_bounds && (*upper_bounds)[j] >= 0) {
      cols[j].has_up = true;
      cols[j].up = (*upper_bounds)[j];
    }
  }
  Simplex sx(std::move(cols), model.rhs);
  SxResult r = sx.solve();
  LPSolution sol;
  sol.float_pivots = r.float_pivots;
  sol.exact_pivots = r.exact_pivots;
  if (r.status == SxResult::Status::infeasible) return sol;
  if (r.status != SxResult::Status::optimal)
    throw std::runtime_error("LP solve did not reach optimality");
  sol.status = LPSolution::Status::optimal;
  sol.objective = r.objective + Rat(model.base_count);
  sol.primal = std::move(r.x);
  sol.row_duals = std::move(r.y);

  if (model.policy == ColumnPolicy::smooth || lower_bounds || upper_bounds) {
    // residual-capacity models and branch-and-bound nodes have no global dual
    // interpretation
    return sol;
  }

  // assemble the dual certificate over all primes <= N
  sol.dual.N = model.N;
  sol.dual.t = model.t;
  const int ns = static_cast<int>(model.row_primes.size());
  std::vector<std::pair<u64, Rat>> w;
  for (int i = 0; i < ns; ++i)
    if (sol.row_duals[i] != 0) w.emplace_back(model.row_primes[i], sol.row_duals[i]);
  for (size_t g = 0; g < model.groups.size(); ++g) {
    Rat yg = sol.row_duals[ns + static_cast<int>(g)];
    if (yg == 0) continue;
    const auto& G = model.groups[g];
    for (u64 q = table.next_prime(G.q_lo - 1); q && q <= G.q_hi; q = table.next_prime(q))
      w.emplace_back(q, yg);
  }
  for (const auto& b : model.base_blocks) {
    // presolved primes carry weight 1
    for (u64 q = table.next_prime(b.p_min - 1); q && q <= b.p_max; q = table.next_prime(q))
      w.emplace_back(q, Rat(1));
  }
  std::sort(w.begin(), w.end());
  sol.dual.weights = std::move(w);
  // monotone repair by running maximum (feasibility is preserved: the
  // covering sums only grow); only kept when it does not weaken the floor
  {
    bool monotone = true;
    Rat prev(0);
    for (auto& [p, wp] : sol.dual.weights) {
      if (wp < prev) {
        monotone = false;
        break;
      }
      prev = wp;
    }
    if (!monotone) {
      DualCertificate repaired = sol.dual;
      Rat run(0);
      for (auto& [p, wp] : repaired.weights) {
        if (wp < run) wp = run;
        else run = wp;
      }
      Rat repaired_value(0);
      for (auto& [p, wp] : repaired.weights)
        if (wp != 0) repaired_value += wp * Rat(legendre_valuation(model.N, p));
      if (floor_rat(repaired_value) == floor_rat(sol.objective)) {
        sol.dual = std::move(repaired);
        sol.dual_monotone_repaired = true;
      }
    }
  }
  sol.dual_report = verify_dual(sol.dual, table);
  sol.has_dual_cert = sol.dual_report.accepted;
  if (sol.has_dual_cert) {
    // strong duality cross-check: verified dual value equals the primal value
    Rat value(0);
    for (const auto& [p, wp] : sol.dual.weights)
      if (wp != 0) value += wp * Rat(legendre_valuation(model.N, p));
    if (value != sol.objective && !sol.dual_monotone_repaired)
      throw std::runtime_error("dual value mismatch against primal objective");
  }
  return sol;
}

namespace lpdetail {

// distribute floor(y) copies of cofactors across a group's primes
inline void distribute_group(const LPModel& model, const PrimeTable& table, size_t g,
                             const std::vector<std::pair<u64, Int>>& cof_counts,
                             Certificate& cert, std::map<u64, Int>& large_used) {
  const auto& G = model.groups[g];
  u64 q = table.next_prime(G.q_lo - 1);
  Int rem = Int(G.e);
  for (auto [m, c] : cof_counts) {
    Int left = c;
    while (left > 0 && q && q <= G.q_hi) {
      Int take = std::min(left, rem);
      if (take > 0) {
        cert.prime_blocks.push_back({Int(m), q, q, take});
        large_used[q] += take;
        left -= take;
        rem -= take;
      }
      if (rem == 0) {
        q = table.next_prime(q);
        rem = Int(G.e);
      }
    }
    if (left > 0) throw std::logic_error("group distribution overflow");
  }
}

}  // namespace lpdetail

// Floor the exact LP primal, collect the per-prime residual surplus, and
// greedily pack the residual into extra factors >= t.
inline Certificate floor_residuals_lower(u64 N, u64 t, const PrimeTable& table,
                                         const LPModel* prebuilt = nullptr,
                                         const LPSolution* presolved = nullptr) {
  LPModel local_model;
  const LPModel& model = prebuilt ? *prebuilt : (local_model = build_model(N, t, ColumnPolicy::interval, table), local_model);
  LPSolution local_sol;
  const LPSolution& sol = presolved ? *presolved : (local_sol = solve_lp(model, table), local_sol);
  if (sol.status != LPSolution::Status::optimal) throw std::runtime_error("LP not optimal");

  Certificate cert;
  cert.N = N;
  cert.t = t;
  cert.prime_blocks = model.base_blocks;
  std::map<u64, Int> large_used;  // primes > sqrt(N) used by group columns

  const int ns = static_cast<int>(model.row_primes.size());
  std::vector<Int> small_used(ns, 0);
  // group floors, collected per group in cofactor order
  std::vector<std::vector<std::pair<u64, Int>>> group_floor(model.groups.size());
  for (size_t j = 0; j < model.cols.size(); ++j) {
    Int f = floor_rat(sol.primal[j]);
    if (f <= 0) continue;
    const auto& col = model.cols[j];
    if (col.group >= 0) {
      group_floor[col.group].emplace_back(to_u64(col.value), f);
    } else {
      cert.explicit_factors.emplace_back(f, col.value);
    }
    for (const auto& [row, a] : col.a)
      if (row < ns) small_used[row] += f * Int(a);
  }
  for (size_t g = 0; g < model.groups.size(); ++g)
    lpdetail::distribute_group(model, table, g, group_floor[g], cert, large_used);

  // residual surplus
  std::vector<std::pair<u64, i64>> residual;
  for (int i = 0; i < ns; ++i) {
    Int r = Int(legendre_valuation(N, model.row_primes[i])) - small_used[i];
    if (r < 0) throw std::logic_error("floored LP overdraws a small prime");
    if (r > 0) residual.emplace_back(model.row_primes[i], to_i64(r));
  }
  for (const auto& G : model.groups) {
    for (u64 q = table.next_prime(G.q_lo - 1); q && q <= G.q_hi; q = table.next_prime(q)) {
      Int used = 0;
      auto it = large_used.find(q);
      if (it != large_used.end()) used = it->second;
      Int r = Int(G.e) - used;
      if (r < 0) throw std::logic_error("group distribution overdraws a prime");
      if (r > 0) residual.emplace_back(q, to_i64(r));
    }
  }
  // non-aggregated interval model: large primes are ordinary rows already
  // counted in small_used; nothing more to do.

  GreedyConfig cfg;
  GreedyEngine engine(N, cfg, table);
  engine.pack_residual_map(t, residual, cert);
  auto rep = verify_subfactorization(cert, table);
  if (!rep.violations.empty())
    throw std::logic_error("floor+residuals produced an invalid certificate: " + rep.reason);
  return cert;
}

// Smooth factorization lower bound: greedy for p > sqrt(N), floor+residuals
// on the sqrt(N)-smooth LP for the rest.
inline Certificate smooth_lower(u64 N, u64 t, const PrimeTable& table) {
  if (N < 100) throw std::invalid_argument("smooth_lower expects N >= 100");
  LPModel model = build_model(N, t, ColumnPolicy::smooth, table);
  LPSolution sol = solve_lp(model, table);
  if (sol.status != LPSolution::Status::optimal) throw std::runtime_error("LP not optimal");
  Certificate cert;
  cert.N = N;
  cert.t = t;
  cert.prime_blocks = model.base_blocks;
  const int ns = static_cast<int>(model.row_primes.size());
  std::vector<Int> used(ns, 0);
  for (size_t j = 0; j < model.cols.size(); ++j) {
    Int f = floor_rat(sol.primal[j]);
    if (f <= 0) continue;
    cert.explicit_factors.emplace_back(f, model.cols[j].value);
    for (const auto& [row, a] : model.cols[j].a) used[row] += f * Int(a);
  }
  std::vector<std::pair<u64, i64>> residual;
  for (int i = 0; i < ns; ++i) {
    Int r = model.rhs[i] - used[i];
    if (r < 0) throw std::logic_error("smooth floor overdraws a prime");
    if (r > 0) residual.emplace_back(model.row_primes[i], to_i64(r));
  }
  GreedyConfig cfg;
  GreedyEngine engine(N, cfg, table);
  engine.pack_residual_map(t, residual, cert);
  auto rep = verify_subfactorization(cert, table);
  if (!rep.violations.empty())
    throw std::logic_error("smooth lower bound produced an invalid certificate");
  return cert;
}

struct IPResult {
  Int lower;   // best integer solution found (exact M when `exact`)
  Rat upper;   // best outstanding LP bound
  bool exact = false;
  long nodes = 0;
};

// Exact M(N, t) by branch-and-bound over the LP relaxation of the J-set
// model.  Branch variable: most fractional, ties broken toward larger j.
// `target`: early out once M >= target is decided (0 = full optimum).
inline IPResult ip_exact(u64 N, u64 t, const PrimeTable& table, long node_limit = 1'000'000,
                         Int target = 0) {
  LPModel model = build_model(N, t, ColumnPolicy::J_set, table);
  const size_t n = model.cols.size();
  IPResult out;
  out.lower = 0;
  struct Node {
    std::vector<std::pair<size_t, Rat>> lows, ups;
  };
  std::deque<Node> stack;
  stack.push_back({});
  Rat best_outstanding(-1);
  while (!stack.empty()) {
    if (out.nodes >= node_limit) {
      out.exact = false;
      // outstanding nodes may still improve on the incumbent
      out.upper = best_outstanding;
      return out;
    }
    Node node = std::move(stack.back());
    stack.pop_back();
    ++out.nodes;
    std::vector<Rat> lows(n, Rat(0)), ups(n, Rat(-1));
    for (auto& [j, v] : node.lows) lows[j] = v;
    for (auto& [j, v] : node.ups) ups[j] = v;
    LPSolution sol = solve_lp(model, table, &lows, &ups);
    if (sol.status != LPSolution::Status::optimal) continue;
    if (floor_rat(sol.objective) <= out.lower) continue;  // cannot improve
    // incumbent from floors
    Int fl(0);
    for (size_t j = 0; j < n; ++j) fl += floor_rat(sol.primal[j]);
    if (fl > out.lower) out.lower = fl;
    if (target > 0 && out.lower >= target) {
      out.exact = true;
      return out;
    }
    // fractional branch variable
    long branch = -1;
    Rat best_frac(0);
    for (size_t j = 0; j < n; ++j) {
      Rat frac = sol.primal[j] - Rat(floor_rat(sol.primal[j]));
      if (frac == 0) continue;
      Rat score = std::min(frac, Rat(1) - frac);
      if (branch < 0 || score > best_frac ||
          (score == best_frac && model.cols[j].value > model.cols[branch].value)) {
        best_frac = score;
        branch = static_cast<long>(j);
      }
    }
    if (branch < 0) continue;  // integral; incumbent already recorded
    if (Rat(floor_rat(sol.objective)) > best_outstanding)
      best_outstanding = Rat(floor_rat(sol.objective));
    Int fv = floor_rat(sol.primal[branch]);
    Node down = node, up = node;
    down.ups.emplace_back(branch, Rat(fv));
    up.lows.emplace_back(branch, Rat(fv + 1));
    stack.push_back(std::move(down));
    stack.push_back(std::move(up));
  }
  out.exact = true;
  out.upper = Rat(out.lower);
  return out;
}

// Exact t(N) for small N: the largest t with M(N, t) >= N.
inline u64 t_exact(u64 N, const PrimeTable& table) {
  if (N <= 3) return 1;
  // binary search on the exact LP upper bound (the J-set relaxation value is
  // non-increasing in t), then decide the survivors with integer programming
  u64 lo = 2, hi = N / 2 + 1;
  auto lp_allows = [&](u64 tt) {
    LPModel m = build_model(N, tt, ColumnPolicy::J_set, table);
    LPSolution s = solve_lp(m, table);
    return s.status == LPSolution::Status::optimal && floor_rat(s.objective) >= Int(N);
  };
  if (!lp_allows(2)) return 1;
  while (hi > lo) {
    u64 mid = lo + (hi - lo + 1) / 2;
    if (lp_allows(mid)) lo = mid;
    else hi = mid - 1;
  }
  // lo is the largest t whose LP relaxation allows M >= N; walk down with IP
  for (u64 tt = lo; tt >= 2; --tt) {
    IPResult r = ip_exact(N, tt, table, 1'000'000, Int(N));
    if (r.exact && r.lower >= Int(N)) return tt;
  }
  return 1;
}

// ---------------------------------------------------------------------------
// LP text export (CPLEX-style) and re-import.
// ---------------------------------------------------------------------------

inline void export_model(const LPModel& model, std::ostream& os) {
  os << "\\ M(" << model.N << "," << model.t << ") relaxation\n";
  os << "Maximize\n obj:";
  for (size_t j = 0; j < model.cols.size(); ++j) {
    os << (j ? " + x" : " x") << j;
    if ((j & 15) == 15) os << "\n     ";
  }
  os << "\nSubject To\n";
  for (int i = 0; i < model.nrows(); ++i) {
    if (i < static_cast<int>(model.row_primes.size())) os << " p" << model.row_primes[i] << ":";
    else os << " g" << (i - model.row_primes.size()) << ":";
    bool first = true;
    for (size_t j = 0; j < model.cols.size(); ++j)
      for (const auto& [row, a] : model.cols[j].a)
        if (row == i) {
          os << (first ? " " : " + ");
          if (a != 1) os << a << " ";
          os << "x" << j;
          first = false;
        }
    os << " <= " << model.rhs[i] << "\n";
  }
  os << "Bounds\n";
  for (size_t j = 0; j < model.cols.size(); ++j) os << " 0 <= x" << j << "\n";
  os << "End\n";
}

inline LPModel import_model(std::istream& is) {
  LPModel model;
  std::string line, section;
  std::map<std::string, int> row_index;
  std::vector<std::string> pending_rows;
  std::string accum;
  auto flush_constraint = [&](const std::string& text) {
    if (text.empty()) return;
    auto colon = text.find(':');
    std::string name = text.substr(0, colon);
    name.erase(0, name.find_first_not_of(" \t"));
    auto le = text.find("<=");
    std::string body = text.substr(colon + 1, le - colon - 1);
    Int rhs(std::string(text.substr(le + 2)));
    int row = model.nrows();
    model.rhs.push_back(rhs);
    if (name[0] == 'p') model.row_primes.push_back(std::stoull(name.substr(1)));
    std::istringstream bs(body);
    std::string tok;
    i64 coeff = 1;
    while (bs >> tok) {
      if (tok == "+") {
        coeff = 1;
        continue;
      }
      if (tok[0] == 'x') {
        size_t j = std::stoull(tok.substr(1));
        if (model.cols.size() <= j) model.cols.resize(j + 1);
        model.cols[j].a.emplace_back(row, coeff);
        coeff = 1;
      } else {
        coeff = std::stoll(tok);
      }
    }
  };
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] == '\\') continue;
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    if (trimmed == "Maximize" || trimmed == "Subject To" || trimmed == "Bounds" ||
        trimmed == "End") {
      if (section == "Subject To") flush_constraint(accum);
      accum.clear();
      section = trimmed;
      continue;
    }
    if (section == "Subject To") {
      if (line.find(':') != std::string::npos) {
        flush_constraint(accum);
        accum = line;
      } else {
        accum += " " + line;
      }
    }
  }
  return model;
}

}  // namespace egs
