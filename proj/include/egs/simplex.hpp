#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "egs/rational.hpp"

namespace egs {

// A column of "maximize sum c_j x_j subject to A x <= rhs, lo <= x <= up"
// with small integer coefficients.  rhs entries are big integers; bounds and
// the objective are rational.  All coefficients are non-negative in this
// project, which guarantees a feasible all-slack start whenever the
// bound-shifted rhs is non-negative.
struct SxCol {
  std::vector<std::pair<int, i64>> a;  // (row, coeff), coeff > 0
  Rat obj = 1;
  Rat lo = 0;
  Rat up = 0;
  bool has_up = false;
};

using i64 = std::int64_t;

struct SxResult {
  enum class Status { optimal, infeasible, limit } status = Status::limit;
  Rat objective;        // exact
  std::vector<Rat> x;   // exact, per structural column
  std::vector<Rat> y;   // exact row duals
  int float_pivots = 0;
  int exact_pivots = 0;
};

namespace sxdetail {

// Exact sparse Gaussian elimination: solves A z = b for square sparse A
// given column-wise.  Markowitz-flavoured pivoting (min row count within a
// minimum-count column) keeps the near-triangular bases of this project
// cheap.  One factorization solves any number of right-hand sides and
// transposed systems.
class SparseGauss {
 public:
  // cols[j]: sparse (row, value) entries of column j; must be square (n x n).
  explicit SparseGauss(const std::vector<std::vector<std::pair<int, Rat>>>& cols) {
    n_ = static_cast<int>(cols.size());
    rows_.assign(n_, {});
    for (int j = 0; j < n_; ++j)
      for (const auto& [i, v] : cols[j])
        if (v != 0) rows_[i][j] = v;
    factor();
  }

  bool singular() const { return singular_; }

  // Solve A z = b.
  std::vector<Rat> solve(std::vector<Rat> b) const {
    // forward elimination replay
    for (const auto& step : elim_) b[step.target] -= step.factor * b[step.source];
    // back substitution in reverse pivot order
    std::vector<Rat> z(n_, Rat(0));
    for (int k = n_ - 1; k >= 0; --k) {
      int i = pivot_row_[k], j = pivot_col_[k];
      Rat acc = b[i];
      for (const auto& [col, v] : final_rows_[i])
        if (col != j) acc -= v * z[col];
      z[j] = acc / final_rows_[i].at(j);
    }
    return z;
  }

  // Solve y A = c, i.e. A^T y = c.
  std::vector<Rat> solve_transposed(std::vector<Rat> c) const {
    // A^T has rows indexed by columns of A; reuse final rows: back-substitute
    // in pivot order for U^T, then replay eliminations backwards.
    std::vector<Rat> y(n_, Rat(0));
    for (int k = 0; k < n_; ++k) {
      int i = pivot_row_[k], j = pivot_col_[k];
      Rat acc = c[j];
      // entries of column j in earlier pivot rows were eliminated; the final
      // matrix U has row i holding the pivot for column j, so U^T row j has
      // entries (i', a_{i'j}) for pivots k' < k with a_{i'j} != 0
      for (int k2 = 0; k2 < k; ++k2) {
        int i2 = pivot_row_[k2];
        auto it = final_rows_[i2].find(j);
        if (it != final_rows_[i2].end()) acc -= it->second * y[i2];
      }
      y[i] = acc / final_rows_[i].at(j);
    }
    // undo eliminations: replay in reverse with transposed roles
    for (auto it = elim_.rbegin(); it != elim_.rend(); ++it)
      y[it->source] -= it->factor * y[it->target];
    return y;
  }

 private:
  struct Elim {
    int target, source;
    Rat factor;
  };

  void factor() {
    std::vector<bool> row_done(n_, false), col_done(n_, false);
    std::vector<int> col_count(n_, 0);
    for (int i = 0; i < n_; ++i)
      for (const auto& [j, v] : rows_[i]) ++col_count[j];
    for (int step = 0; step < n_; ++step) {
      // pick the active column with the fewest active entries, then the row
      // within it with the fewest active entries
      int best_col = -1, best_cc = std::numeric_limits<int>::max();
      for (int j = 0; j < n_; ++j)
        if (!col_done[j] && col_count[j] > 0 && col_count[j] < best_cc) {
          best_cc = col_count[j];
          best_col = j;
        }
      if (best_col < 0) {
        singular_ = true;
        return;
      }
      int best_row = -1, best_rc = std::numeric_limits<int>::max();
      for (int i = 0; i < n_; ++i) {
        if (row_done[i]) continue;
        auto it = rows_[i].find(best_col);
        if (it == rows_[i].end() || it->second == 0) continue;
        int rc = static_cast<int>(rows_[i].size());
        if (rc < best_rc) {
          best_rc = rc;
          best_row = i;
        }
      }
      if (best_row < 0) {
        singular_ = true;
        return;
      }
      int pi = best_row, pj = best_col;
      const Rat pivot = rows_[pi].at(pj);
      for (int i = 0; i < n_; ++i) {
        if (row_done[i] || i == pi) continue;
        auto it = rows_[i].find(pj);
        if (it == rows_[i].end() || it->second == 0) continue;
        Rat f = it->second / pivot;
        elim_.push_back({i, pi, f});
        for (const auto& [j, v] : rows_[pi]) {
          if (col_done[j] && j != pj) continue;
          Rat& cell = rows_[i][j];
          Rat before = cell;
          cell -= f * v;
          if (before == 0 && cell != 0) ++col_count[j];
          if (before != 0 && cell == 0) --col_count[j];
        }
        // drop explicit zeros to keep rows sparse
        for (auto jt = rows_[i].begin(); jt != rows_[i].end();)
          jt = (jt->second == 0) ? rows_[i].erase(jt) : std::next(jt);
      }
      row_done[pi] = true;
      col_done[pj] = true;
      for (const auto& [j, v] : rows_[pi])
        if (!col_done[j] || j == pj) --col_count[j];
      pivot_row_.push_back(pi);
      pivot_col_.push_back(pj);
    }
    final_rows_ = rows_;
  }

  int n_ = 0;
  bool singular_ = false;
  std::vector<std::map<int, Rat>> rows_, final_rows_;
  std::vector<Elim> elim_;
  std::vector<int> pivot_row_, pivot_col_;
};

}  // namespace sxdetail

// Bounded-variable primal simplex: a fast floating-point search followed by
// exact verification of the final basis (sparse rational solves) and exact
// cleanup pivots until the optimality conditions hold in exact arithmetic.
class Simplex {
 public:
  Simplex(std::vector<SxCol> cols, std::vector<Int> rhs)
      : cols_(std::move(cols)), rhs_(std::move(rhs)) {
    m_ = static_cast<int>(rhs_.size());
    n_ = static_cast<int>(cols_.size());
  }

  SxResult solve(long max_float_pivots = 2'000'000, int max_exact_pivots = 400) {
    SxResult res;
    // bound-shifted rhs must stay non-negative, else the node is infeasible
    // outright (all coefficients are non-negative)
    std::vector<Rat> rhs_eff(m_);
    for (int i = 0; i < m_; ++i) rhs_eff[i] = Rat(rhs_[i]);
    for (int j = 0; j < n_; ++j) {
      if (cols_[j].has_up && cols_[j].up < cols_[j].lo) {
        res.status = SxResult::Status::infeasible;
        return res;
      }
      if (cols_[j].lo != 0)
        for (const auto& [i, a] : cols_[j].a) rhs_eff[i] -= Rat(a) * cols_[j].lo;
    }
    for (int i = 0; i < m_; ++i)
      if (rhs_eff[i] < 0) {
        res.status = SxResult::Status::infeasible;
        return res;
      }

    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;  // slacks
    at_upper_.assign(n_, false);

    try {
      float_solve(rhs_eff, max_float_pivots, res);
      exact_polish(rhs_eff, max_exact_pivots, res);
      return res;
    } catch (const std::runtime_error&) {
      // fall back to exact Bland primal from the all-slack basis; slack
      // start is feasible, so only primal pivots occur and Bland terminates
      for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;
      at_upper_.assign(n_, false);
      res = SxResult{};
      exact_polish(rhs_eff, 1 << 26, res);
      return res;
    }
  }

 private:
  // ---------- floating point search ----------
  void float_solve(const std::vector<Rat>& rhs_eff, long max_pivots, SxResult& res) {
    std::vector<double> b(m_);
    for (int i = 0; i < m_; ++i) b[i] = rat_to_double(rhs_eff[i]);
    std::vector<double> binv(static_cast<size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) binv[static_cast<size_t>(i) * m_ + i] = 1.0;
    std::vector<double> xb = b;
    std::vector<double> range(n_);  // up - lo where bounded
    for (int j = 0; j < n_; ++j)
      range[j] = cols_[j].has_up ? rat_to_double(cols_[j].up - cols_[j].lo) : -1.0;

    auto refactor = [&]() {
      // rebuild binv and xb from the basis headers by dense Gauss-Jordan
      std::vector<double> mat(static_cast<size_t>(m_) * 2 * m_, 0.0);
      for (int i = 0; i < m_; ++i) {
        int bj = basis_[i];
        if (bj >= n_) {
          mat[static_cast<size_t>(bj - n_) * 2 * m_ + i] = 1.0;
        } else {
          for (const auto& [r, a] : cols_[bj].a)
            mat[static_cast<size_t>(r) * 2 * m_ + i] = static_cast<double>(a);
        }
        mat[static_cast<size_t>(i) * 2 * m_ + m_ + i] = 1.0;
      }
      for (int c = 0; c < m_; ++c) {
        int piv = -1;
        double bestv = 1e-12;
        for (int r = c; r < m_; ++r)
          if (std::fabs(mat[static_cast<size_t>(r) * 2 * m_ + c]) > bestv) {
            bestv = std::fabs(mat[static_cast<size_t>(r) * 2 * m_ + c]);
            piv = r;
          }
        if (piv < 0) return false;
        if (piv != c)
          for (int k = 0; k < 2 * m_; ++k)
            std::swap(mat[static_cast<size_t>(piv) * 2 * m_ + k],
                      mat[static_cast<size_t>(c) * 2 * m_ + k]);
        double pv = mat[static_cast<size_t>(c) * 2 * m_ + c];
        for (int k = 0; k < 2 * m_; ++k) mat[static_cast<size_t>(c) * 2 * m_ + k] /= pv;
        for (int r = 0; r < m_; ++r) {
          if (r == c) continue;
          double f = mat[static_cast<size_t>(r) * 2 * m_ + c];
          if (f == 0.0) continue;
          for (int k = 0; k < 2 * m_; ++k)
            mat[static_cast<size_t>(r) * 2 * m_ + k] -= f * mat[static_cast<size_t>(c) * 2 * m_ + k];
        }
      }
      for (int r = 0; r < m_; ++r)
        for (int k = 0; k < m_; ++k)
          binv[static_cast<size_t>(r) * m_ + k] = mat[static_cast<size_t>(r) * 2 * m_ + m_ + k];
      // xb = binv * (b - A_N x_N)
      std::vector<double> rb = b;
      for (int j = 0; j < n_; ++j)
        if (at_upper_[j] && range[j] > 0)
          for (const auto& [r, a] : cols_[j].a) rb[r] -= a * range[j];
      for (int i = 0; i < m_; ++i) {
        double s = 0;
        for (int k = 0; k < m_; ++k) s += binv[static_cast<size_t>(i) * m_ + k] * rb[k];
        xb[i] = s;
      }
      return true;
    };

    std::vector<bool> in_basis(n_ + m_, false);
    for (int i = 0; i < m_; ++i) in_basis[basis_[i]] = true;
    const double eps = 1e-9;
    long pivots = 0;
    int since_refactor = 0;
    std::vector<double> y(m_), z(m_);
    while (pivots < max_pivots) {
      // y = c_B binv
      for (int k = 0; k < m_; ++k) {
        double s = 0;
        for (int i = 0; i < m_; ++i) {
          int bj = basis_[i];
          if (bj < n_) {
            double cb = rat_to_double(cols_[bj].obj);
            if (cb != 0) s += cb * binv[static_cast<size_t>(i) * m_ + k];
          }
        }
        y[k] = s;
      }
      // pricing (Dantzig, lowest index tie-break)
      int enter = -1;
      bool enter_from_upper = false;
      double best = eps;
      for (int j = 0; j < n_; ++j) {
        if (in_basis[j]) continue;
        double d = rat_to_double(cols_[j].obj);
        for (const auto& [r, a] : cols_[j].a) d -= y[r] * a;
        if (!at_upper_[j] && d > best) {
          best = d;
          enter = j;
          enter_from_upper = false;
        } else if (at_upper_[j] && -d > best) {
          best = -d;
          enter = j;
          enter_from_upper = true;
        }
      }
      // slack columns can re-enter when their dual goes negative
      for (int i0 = 0; i0 < m_; ++i0) {
        int j = n_ + i0;
        if (in_basis[j]) continue;
        double d = -y[i0];
        if (d > best) {
          best = d;
          enter = j;
          enter_from_upper = false;
        }
      }
      if (enter < 0) break;  // float-optimal

      // z = binv * a_enter (direction of basic change per unit increase)
      double dir = enter_from_upper ? -1.0 : 1.0;
      std::fill(z.begin(), z.end(), 0.0);
      if (enter < n_) {
        for (const auto& [r, a] : cols_[enter].a)
          for (int i = 0; i < m_; ++i) z[i] += binv[static_cast<size_t>(i) * m_ + r] * a;
      } else {
        int r = enter - n_;
        for (int i = 0; i < m_; ++i) z[i] = binv[static_cast<size_t>(i) * m_ + r];
      }
      // bounded ratio test on delta >= 0 (movement of entering toward dir)
      double limit = std::numeric_limits<double>::infinity();
      int leave = -1;
      bool leave_at_upper = false;
      if (enter < n_ && range[enter] > 0) limit = range[enter];
      for (int i = 0; i < m_; ++i) {
        double zi = z[i] * dir;
        int bj = basis_[i];
        double upran = (bj < n_) ? range[bj] : -1.0;
        if (zi > eps) {
          double t = xb[i] / zi;
          if (t < limit - 1e-12) {
            limit = t;
            leave = i;
            leave_at_upper = false;
          }
        } else if (zi < -eps && upran > 0) {
          double t = (xb[i] - upran) / zi;
          if (t < limit - 1e-12) {
            limit = t;
            leave = i;
            leave_at_upper = true;
          }
        }
      }
      if (!std::isfinite(limit)) break;  // unbounded direction: leave to exact phase
      ++pivots;
      if (leave < 0) {
        // bound flip of the entering variable
        at_upper_[enter] = !enter_from_upper;
        for (int i = 0; i < m_; ++i) xb[i] -= z[i] * dir * limit;
        continue;
      }
      // pivot: entering replaces basis_[leave]
      int out = basis_[leave];
      if (out < n_) at_upper_[out] = leave_at_upper;
      in_basis[out] = false;
      basis_[leave] = enter;
      in_basis[enter] = true;
      if (enter < n_ && enter_from_upper) at_upper_[enter] = false;
      // update binv: divide pivot row by z[leave], eliminate elsewhere
      double zp = z[leave];
      for (int k = 0; k < m_; ++k) binv[static_cast<size_t>(leave) * m_ + k] /= zp;
      for (int i = 0; i < m_; ++i) {
        if (i == leave) continue;
        double f = z[i];
        if (f == 0.0) continue;
        for (int k = 0; k < m_; ++k)
          binv[static_cast<size_t>(i) * m_ + k] -= f * binv[static_cast<size_t>(leave) * m_ + k];
      }
      if (++since_refactor >= 256) {
        since_refactor = 0;
        refactor();
      } else {
        // cheap xb maintenance
        for (int i = 0; i < m_; ++i) xb[i] -= z[i] * dir * limit;
        xb[leave] = (enter_from_upper && enter < n_) ? range[enter] - limit : limit;
      }
    }
    res.float_pivots = static_cast<int>(pivots);
  }

  static double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

  // ---------- exact verification and cleanup ----------
  void exact_polish(const std::vector<Rat>& rhs_eff_in, int max_exact_pivots, SxResult& res) {
    std::vector<int> pos(n_ + m_, -1);
    for (;;) {
      std::fill(pos.begin(), pos.end(), -1);
      for (int i = 0; i < m_; ++i) pos[basis_[i]] = i;
      // exact basis columns
      std::vector<std::vector<std::pair<int, Rat>>> bcols(m_);
      for (int i = 0; i < m_; ++i) {
        int bj = basis_[i];
        if (bj >= n_) bcols[i].emplace_back(bj - n_, Rat(1));
        else
          for (const auto& [r, a] : cols_[bj].a) bcols[i].emplace_back(r, Rat(a));
      }
      sxdetail::SparseGauss lu(bcols);
      if (lu.singular()) throw std::runtime_error("simplex: singular basis in exact phase");
      // rhs minus nonbasic-at-upper contributions (all structural nonbasic at
      // lower contribute through the pre-shift already)
      std::vector<Rat> rhs_eff = rhs_eff_in;
      for (int j = 0; j < n_; ++j) {
        if (pos[j] >= 0 || !at_upper_[j]) continue;
        Rat r = cols_[j].up - cols_[j].lo;
        for (const auto& [i, a] : cols_[j].a) rhs_eff[i] -= Rat(a) * r;
      }
      std::vector<Rat> xb = lu.solve(rhs_eff);
      // primal feasibility of the basis
      int bad_row = -1;
      bool bad_low = true;
      for (int i = 0; i < m_; ++i) {
        int bj = basis_[i];
        Rat lo(0);
        Rat up;
        bool hup = false;
        if (bj < n_) {
          up = cols_[bj].has_up ? cols_[bj].up - cols_[bj].lo : Rat(0);
          hup = cols_[bj].has_up;
        }
        if (xb[i] < lo) {
          bad_row = i;
          bad_low = true;
          break;
        }
        if (hup && xb[i] > up) {
          bad_row = i;
          bad_low = false;
          break;
        }
      }
      if (bad_row >= 0) {
        if (res.exact_pivots >= max_exact_pivots)
          throw std::runtime_error("simplex: exact pivot budget exhausted (primal)");
        ++res.exact_pivots;
        dual_pivot(lu, xb, rhs_eff_in, bad_row, bad_low, pos);
        continue;
      }
      // duals and reduced costs
      std::vector<Rat> cb(m_, Rat(0));
      for (int i = 0; i < m_; ++i)
        if (basis_[i] < n_) cb[i] = cols_[basis_[i]].obj;
      std::vector<Rat> y = lu.solve_transposed(cb);
      int enter = -1;
      bool from_upper = false;
      for (int i = 0; i < m_; ++i) {
        if (pos[n_ + i] < 0 && y[i] < 0) {
          enter = n_ + i;
          from_upper = false;
          break;
        }
      }
      if (enter < 0) {
        for (int j = 0; j < n_; ++j) {
          if (pos[j] >= 0) continue;
          Rat d = cols_[j].obj;
          for (const auto& [r, a] : cols_[j].a) d -= y[r] * Rat(a);
          if (!at_upper_[j] && d > 0) {
            enter = j;
            from_upper = false;
            break;
          }
          if (at_upper_[j] && d < 0) {
            enter = j;
            from_upper = true;
            break;
          }
        }
      }
      if (enter < 0) {
        // exact optimal: report
        res.status = SxResult::Status::optimal;
        res.x.assign(n_, Rat(0));
        for (int j = 0; j < n_; ++j) {
          if (pos[j] >= 0) res.x[j] = cols_[j].lo + xb[pos[j]];
          else if (at_upper_[j]) res.x[j] = cols_[j].up;
          else res.x[j] = cols_[j].lo;
        }
        res.y = y;
        res.objective = 0;
        for (int j = 0; j < n_; ++j)
          if (res.x[j] != 0 && cols_[j].obj != 0) res.objective += cols_[j].obj * res.x[j];
        return;
      }
      if (res.exact_pivots >= max_exact_pivots)
        throw std::runtime_error("simplex: exact pivot budget exhausted (dual)");
      ++res.exact_pivots;
      primal_pivot(lu, xb, enter, from_upper, pos);
    }
  }

  // one exact primal pivot: entering column moves from its bound
  void primal_pivot(const sxdetail::SparseGauss& lu, const std::vector<Rat>& xb, int enter,
                    bool from_upper, const std::vector<int>& /*pos*/) {
    std::vector<Rat> acol(m_, Rat(0));
    if (enter < n_)
      for (const auto& [r, a] : cols_[enter].a) acol[r] = Rat(a);
    else
      acol[enter - n_] = 1;
    std::vector<Rat> z = lu.solve(acol);
    Rat dirsgn = from_upper ? Rat(-1) : Rat(1);
    bool has_limit = false;
    Rat limit;
    int leave = -1;
    bool leave_at_upper = false;
    if (enter < n_ && cols_[enter].has_up) {
      limit = cols_[enter].up - cols_[enter].lo;
      has_limit = true;
    }
    for (int i = 0; i < m_; ++i) {
      Rat zi = z[i] * dirsgn;
      int bj = basis_[i];
      bool hup = bj < n_ && cols_[bj].has_up;
      Rat upran = hup ? cols_[bj].up - cols_[bj].lo : Rat(0);
      if (zi > 0) {
        Rat t = xb[i] / zi;
        // Bland-style leaving tie-break: smallest variable index
        if (!has_limit || t < limit || (t == limit && (leave < 0 || bj < basis_[leave]))) {
          has_limit = true;
          limit = t;
          leave = i;
          leave_at_upper = false;
        }
      } else if (zi < 0 && hup) {
        Rat t = (xb[i] - upran) / zi;
        if (!has_limit || t < limit || (t == limit && (leave < 0 || bj < basis_[leave]))) {
          has_limit = true;
          limit = t;
          leave = i;
          leave_at_upper = true;
        }
      }
    }
    if (!has_limit) throw std::runtime_error("simplex: unbounded in exact phase");
    if (leave < 0) {
      // pure bound flip
      at_upper_[enter] = !from_upper;
      return;
    }
    int out = basis_[leave];
    if (out < n_) at_upper_[out] = leave_at_upper;
    basis_[leave] = enter;
    if (enter < n_) at_upper_[enter] = false;
  }

  // one exact dual pivot: basic variable at bad_row violates its bound
  void dual_pivot(const sxdetail::SparseGauss& lu, const std::vector<Rat>& xb,
                  const std::vector<Rat>& /*rhs*/, int bad_row, bool bad_low,
                  const std::vector<int>& pos) {
    // row of B^-1: e_{bad_row} solved against transpose
    std::vector<Rat> e(m_, Rat(0));
    e[bad_row] = 1;
    std::vector<Rat> brow = lu.solve_transposed(e);
    // candidate entering: nonbasic j with alpha_j = brow . a_j of the right
    // sign; choose Bland-style lowest index for termination
    int enter = -1;
    bool from_upper = false;
        for (int j = 0; j < n_ + m_ && enter < 0; ++j) {
      if (pos[j] >= 0) continue;
      Rat alpha(0);
      if (j < n_) {
        for (const auto& [r, a] : cols_[j].a) alpha += brow[r] * Rat(a);
      } else {
        alpha = brow[j - n_];
      }
      if (alpha == 0) continue;
      bool at_up = j < n_ && at_upper_[j];
      // x_bad needs to increase (bad_low) or decrease; moving j off its bound
      // by +delta changes x_bad by -alpha*delta (from lower) or +alpha*delta
      // (from upper)
      if (bad_low) {
        if (!at_up && alpha < 0) { enter = j; from_upper = false; }
        if (at_up && alpha > 0) { enter = j; from_upper = true; }
      } else {
        if (!at_up && alpha > 0) { enter = j; from_upper = false; }
        if (at_up && alpha < 0) { enter = j; from_upper = true; }
      }
    }
    if (enter < 0) throw std::runtime_error("simplex: exact phase found infeasible basis");
    int out = basis_[bad_row];
    if (out < n_) at_upper_[out] = !bad_low;
    basis_[bad_row] = enter;
    if (enter < n_ && from_upper) at_upper_[enter] = false;
    (void)xb;
  }

  int m_ = 0, n_ = 0;
  std::vector<SxCol> cols_;
  std::vector<Int> rhs_;
  std::vector<int> basis_;
  std::vector<bool> at_upper_;
};

}  // namespace egs
