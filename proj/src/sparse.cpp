/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#include "lurk/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lurk {

double SparseUpperTri::sum_log_diag() const {
  double s = 0.0;
  for (double d : diag) s += std::log(d);
  return s;
}

int SparseUpperTri::max_col_nnz() const {
  int best = 0;
  for (int j = 0; j < n; ++j)
    best = std::max(best, static_cast<int>(col_ptr[static_cast<size_t>(j) + 1] -
                                           col_ptr[static_cast<size_t>(j)]));
  return best;
}

VecX utri_mul(const SparseUpperTri& t, const VecX& x) {
  if (x.size() != t.n) throw data_error("utri_mul: dimension mismatch");
  VecX y(t.n);
  for (int j = 0; j < t.n; ++j) y[j] = t.diag[static_cast<size_t>(j)] * x[j];
  for (int j = 0; j < t.n; ++j)
    for (std::int64_t p = t.col_ptr[static_cast<size_t>(j)];
         p < t.col_ptr[static_cast<size_t>(j) + 1]; ++p)
      y[t.rows[static_cast<size_t>(p)]] += t.vals[static_cast<size_t>(p)] * x[j];
  return y;
}

VecX utri_tmul(const SparseUpperTri& t, const VecX& x) {
  if (x.size() != t.n) throw data_error("utri_tmul: dimension mismatch");
  VecX y(t.n);
  for (int j = 0; j < t.n; ++j) {
    double s = t.diag[static_cast<size_t>(j)] * x[j];
    for (std::int64_t p = t.col_ptr[static_cast<size_t>(j)];
         p < t.col_ptr[static_cast<size_t>(j) + 1]; ++p)
      s += t.vals[static_cast<size_t>(p)] * x[t.rows[static_cast<size_t>(p)]];
    y[j] = s;
  }
  return y;
}

VecX tri_solve(const SparseUpperTri& t, const VecX& b, bool transpose) {
  if (b.size() != t.n) throw data_error("tri_solve: dimension mismatch");
  for (int j = 0; j < t.n; ++j)
    if (t.diag[static_cast<size_t>(j)] == 0.0)
      throw numeric_error("tri_solve: zero diagonal at index " + std::to_string(j));
  VecX x = b;
  if (!transpose) {
    for (int j = t.n - 1; j >= 0; --j) {
      x[j] /= t.diag[static_cast<size_t>(j)];
      for (std::int64_t p = t.col_ptr[static_cast<size_t>(j)];
           p < t.col_ptr[static_cast<size_t>(j) + 1]; ++p)
        x[t.rows[static_cast<size_t>(p)]] -= t.vals[static_cast<size_t>(p)] * x[j];
    }
  } else {
    for (int j = 0; j < t.n; ++j) {
      double s = x[j];
      for (std::int64_t p = t.col_ptr[static_cast<size_t>(j)];
           p < t.col_ptr[static_cast<size_t>(j) + 1]; ++p)
        s -= t.vals[static_cast<size_t>(p)] * x[t.rows[static_cast<size_t>(p)]];
      x[j] = s / t.diag[static_cast<size_t>(j)];
    }
  }
  return x;
}

MatX SparseSym::to_dense() const {
  MatX w = MatX::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (std::int64_t p = col_ptr[static_cast<size_t>(j)];
         p < col_ptr[static_cast<size_t>(j) + 1]; ++p) {
      const int i = rows[static_cast<size_t>(p)];
      w(i, j) = vals[static_cast<size_t>(p)];
      w(j, i) = vals[static_cast<size_t>(p)];
    }
  return w;
}

// ---------------------------------------------------------------------------
// ReverseCholesky

ReverseCholesky::ReverseCholesky(const SparseSym& w) { analyze(w); }

void ReverseCholesky::analyze(const SparseSym& w) {
  n_ = w.n;
  const int n = n_;
  const auto rev = [n](int i) { return n - 1 - i; };

  // Build the pattern of M = P W P' (upper CSC, ascending rows, diag last).
  // The W entry (i, j), i <= j, lands at M(rev(j), rev(i)).
  mp_.assign(static_cast<size_t>(n) + 1, 0);
  const std::int64_t nnz = w.col_ptr[static_cast<size_t>(n)];
  std::vector<std::int64_t> count(static_cast<size_t>(n), 0);
  for (int j = 0; j < n; ++j)
    for (std::int64_t p = w.col_ptr[static_cast<size_t>(j)];
         p < w.col_ptr[static_cast<size_t>(j) + 1]; ++p)
      ++count[static_cast<size_t>(rev(w.rows[static_cast<size_t>(p)]))];
  for (int c = 0; c < n; ++c) mp_[static_cast<size_t>(c) + 1] = mp_[static_cast<size_t>(c)] + count[static_cast<size_t>(c)];
  mi_.assign(static_cast<size_t>(nnz), 0);
  wslot_.assign(static_cast<size_t>(nnz), 0);
  mx_.assign(static_cast<size_t>(nnz), 0.0);
  std::vector<std::int64_t> next(mp_.begin(), mp_.end() - 1);
  // iterate W columns in descending order so M rows append in ascending order
  for (int j = n - 1; j >= 0; --j) {
    const int mrow = rev(j);
    for (std::int64_t p = w.col_ptr[static_cast<size_t>(j)];
         p < w.col_ptr[static_cast<size_t>(j) + 1]; ++p) {
      const int mcol = rev(w.rows[static_cast<size_t>(p)]);
      const std::int64_t q = next[static_cast<size_t>(mcol)]++;
      mi_[static_cast<size_t>(q)] = mrow;
      wslot_[static_cast<size_t>(q)] = p;
    }
  }

  // elimination tree of M
  parent_.assign(static_cast<size_t>(n), -1);
  std::vector<int> ancestor(static_cast<size_t>(n), -1);
  for (int k = 0; k < n; ++k) {
    for (std::int64_t p = mp_[static_cast<size_t>(k)]; p < mp_[static_cast<size_t>(k) + 1]; ++p) {
      int i = mi_[static_cast<size_t>(p)];
      while (i != -1 && i < k) {
        const int inext = ancestor[static_cast<size_t>(i)];
        ancestor[static_cast<size_t>(i)] = k;
        if (inext == -1) parent_[static_cast<size_t>(i)] = k;
        i = inext;
      }
    }
  }

  // column counts of L via row patterns (ereach), then allocate
  std::vector<std::int64_t> lcount(static_cast<size_t>(n), 1);  // diagonal
  std::vector<int> wmark(static_cast<size_t>(n), -1);
  for (int k = 0; k < n; ++k) {
    wmark[static_cast<size_t>(k)] = k;
    for (std::int64_t p = mp_[static_cast<size_t>(k)]; p < mp_[static_cast<size_t>(k) + 1]; ++p) {
      int i = mi_[static_cast<size_t>(p)];
      while (i < k && wmark[static_cast<size_t>(i)] != k) {
        ++lcount[static_cast<size_t>(i)];
        wmark[static_cast<size_t>(i)] = k;
        i = parent_[static_cast<size_t>(i)];
      }
    }
  }
  lp_.assign(static_cast<size_t>(n) + 1, 0);
  for (int c = 0; c < n; ++c) lp_[static_cast<size_t>(c) + 1] = lp_[static_cast<size_t>(c)] + lcount[static_cast<size_t>(c)];
  li_.assign(static_cast<size_t>(lp_[static_cast<size_t>(n)]), 0);
  lx_.assign(li_.size(), 0.0);
}

void ReverseCholesky::factor(const SparseSym& w) {
  if (w.n != n_ || w.col_ptr[static_cast<size_t>(n_)] != static_cast<std::int64_t>(wslot_.size()))
    throw data_error("ReverseCholesky::factor: pattern mismatch");
  const int n = n_;
  for (size_t q = 0; q < wslot_.size(); ++q)
    mx_[q] = w.vals[static_cast<size_t>(wslot_[q])];

  // up-looking Cholesky of M: row k of L is found by a sparse triangular
  // solve whose pattern is the etree reach of M's column k
  std::vector<std::int64_t> fill(static_cast<size_t>(n));
  for (int c = 0; c < n; ++c) fill[static_cast<size_t>(c)] = lp_[static_cast<size_t>(c)] + 1;
  std::vector<int> wmark(static_cast<size_t>(n), -1);
  std::vector<int> stack(static_cast<size_t>(n));
  std::vector<int> path(static_cast<size_t>(n));
  std::vector<double> x(static_cast<size_t>(n), 0.0);

  const auto rev = [n](int i) { return n - 1 - i; };

  for (int k = 0; k < n; ++k) {
    int top = n;
    wmark[static_cast<size_t>(k)] = k;
    for (std::int64_t p = mp_[static_cast<size_t>(k)]; p < mp_[static_cast<size_t>(k) + 1]; ++p) {
      const int row = mi_[static_cast<size_t>(p)];
      x[static_cast<size_t>(row)] = mx_[static_cast<size_t>(p)];
      int i = row;
      int len = 0;
      while (i < k && wmark[static_cast<size_t>(i)] != k) {
        path[static_cast<size_t>(len++)] = i;
        wmark[static_cast<size_t>(i)] = k;
        i = parent_[static_cast<size_t>(i)];
      }
      while (len > 0) stack[static_cast<size_t>(--top)] = path[static_cast<size_t>(--len)];
    }
    double d = x[static_cast<size_t>(k)];
    x[static_cast<size_t>(k)] = 0.0;
    for (; top < n; ++top) {
      const int j = stack[static_cast<size_t>(top)];
      const double lkj = x[static_cast<size_t>(j)] / lx_[static_cast<size_t>(lp_[static_cast<size_t>(j)])];
      x[static_cast<size_t>(j)] = 0.0;
      for (std::int64_t p = lp_[static_cast<size_t>(j)] + 1; p < fill[static_cast<size_t>(j)]; ++p)
        x[static_cast<size_t>(li_[static_cast<size_t>(p)])] -= lx_[static_cast<size_t>(p)] * lkj;
      d -= lkj * lkj;
      const std::int64_t q = fill[static_cast<size_t>(j)]++;
      li_[static_cast<size_t>(q)] = k;
      lx_[static_cast<size_t>(q)] = lkj;
    }
    if (!(d > 0.0))
      throw numeric_error(
          "reverse Cholesky: non-positive pivot at index " + std::to_string(rev(k)) +
          " (matrix not positive definite)");
    li_[static_cast<size_t>(lp_[static_cast<size_t>(k)])] = k;
    lx_[static_cast<size_t>(lp_[static_cast<size_t>(k)])] = std::sqrt(d);
  }
  factored_ = true;
}

double ReverseCholesky::sum_log_diag() const {
  double s = 0.0;
  for (int c = 0; c < n_; ++c) s += std::log(lx_[static_cast<size_t>(lp_[static_cast<size_t>(c)])]);
  return s;
}

SparseUpperTri ReverseCholesky::v_factor() const {
  const int n = n_;
  const auto rev = [n](int i) { return n - 1 - i; };
  SparseUpperTri v;
  v.n = n;
  v.diag.assign(static_cast<size_t>(n), 0.0);
  v.col_ptr.assign(static_cast<size_t>(n) + 1, 0);
  for (int c = 0; c < n; ++c) {
    const std::int64_t len = lp_[static_cast<size_t>(c) + 1] - lp_[static_cast<size_t>(c)] - 1;
    v.col_ptr[static_cast<size_t>(rev(c)) + 1] = len;
    v.diag[static_cast<size_t>(rev(c))] = lx_[static_cast<size_t>(lp_[static_cast<size_t>(c)])];
  }
  for (int j = 0; j < n; ++j) v.col_ptr[static_cast<size_t>(j) + 1] += v.col_ptr[static_cast<size_t>(j)];
  v.rows.assign(static_cast<size_t>(v.col_ptr[static_cast<size_t>(n)]), 0);
  v.vals.assign(v.rows.size(), 0.0);
  for (int c = 0; c < n; ++c) {
    const int j = rev(c);
    std::int64_t q = v.col_ptr[static_cast<size_t>(j)];
    // L rows ascend, so reversed rows descend; emit in reverse for ascending
    for (std::int64_t p = lp_[static_cast<size_t>(c) + 1] - 1; p > lp_[static_cast<size_t>(c)]; --p) {
      v.rows[static_cast<size_t>(q)] = rev(li_[static_cast<size_t>(p)]);
      v.vals[static_cast<size_t>(q)] = lx_[static_cast<size_t>(p)];
      ++q;
    }
  }
  return v;
}

void ReverseCholesky::solve_v(VecX& x) const {
  if (!factored_) throw numeric_error("ReverseCholesky: solve before factor()");
  const int n = n_;
  VecX y(n);
  for (int a = 0; a < n; ++a) y[a] = x[n - 1 - a];
  for (int c = 0; c < n; ++c) {
    y[c] /= lx_[static_cast<size_t>(lp_[static_cast<size_t>(c)])];
    const double yc = y[c];
    for (std::int64_t p = lp_[static_cast<size_t>(c)] + 1; p < lp_[static_cast<size_t>(c) + 1]; ++p)
      y[li_[static_cast<size_t>(p)]] -= lx_[static_cast<size_t>(p)] * yc;
  }
  for (int a = 0; a < n; ++a) x[n - 1 - a] = y[a];
}

void ReverseCholesky::solve_vt(VecX& x) const {
  if (!factored_) throw numeric_error("ReverseCholesky: solve before factor()");
  const int n = n_;
  VecX y(n);
  for (int a = 0; a < n; ++a) y[a] = x[n - 1 - a];
  for (int c = n - 1; c >= 0; --c) {
    double s = y[c];
    for (std::int64_t p = lp_[static_cast<size_t>(c)] + 1; p < lp_[static_cast<size_t>(c) + 1]; ++p)
      s -= lx_[static_cast<size_t>(p)] * y[li_[static_cast<size_t>(p)]];
    y[c] = s / lx_[static_cast<size_t>(lp_[static_cast<size_t>(c)])];
  }
  for (int a = 0; a < n; ++a) x[n - 1 - a] = y[a];
}

void ReverseCholesky::solve_w_inv(VecX& x) const {
  solve_v(x);
  solve_vt(x);
}

SparseUpperTri reverse_cholesky(const SparseSym& w) {
  ReverseCholesky rc(w);
  rc.factor(w);
  return rc.v_factor();
}

// ---------------------------------------------------------------------------
// SelectedInverse

SelectedInverse::SelectedInverse(const ReverseCholesky& chol) {
  if (!chol.factored())
    throw numeric_error("SelectedInverse: factorization not computed");
  n_ = chol.n_;
  const int n = n_;
  zp_ = chol.lp_;
  zi_ = chol.li_;
  zx_.assign(zi_.size(), 0.0);
  const auto& lp = chol.lp_;
  const auto& li = chol.li_;
  const auto& lx = chol.lx_;

  // Z(a, b) for a >= b, both in the pattern of column b
  auto lookup = [&](int a, int b) -> double {
    const auto begin = zi_.begin() + static_cast<std::ptrdiff_t>(zp_[static_cast<size_t>(b)]);
    const auto end = zi_.begin() + static_cast<std::ptrdiff_t>(zp_[static_cast<size_t>(b) + 1]);
    const auto it = std::lower_bound(begin, end, a);
    if (it == end || *it != a)
      throw numeric_error("selected inverse: factor pattern not closed");
    return zx_[static_cast<size_t>(it - zi_.begin())];
  };

  for (int j = n - 1; j >= 0; --j) {
    const std::int64_t pj = lp[static_cast<size_t>(j)];
    const double ljj = lx[static_cast<size_t>(pj)];
    const std::int64_t lo = pj + 1, hi = lp[static_cast<size_t>(j) + 1];
    // off-diagonal column entries, then the diagonal (which needs them)
    for (std::int64_t p = lo; p < hi; ++p) {
      const int i = li[static_cast<size_t>(p)];
      double s = 0.0;
      for (std::int64_t q = lo; q < hi; ++q) {
        const int k = li[static_cast<size_t>(q)];
        const double lhat = lx[static_cast<size_t>(q)] / ljj;
        s += lhat * (k >= i ? lookup(k, i) : lookup(i, k));
      }
      zx_[static_cast<size_t>(p)] = -s;
    }
    double sdiag = 0.0;
    for (std::int64_t q = lo; q < hi; ++q)
      sdiag += (lx[static_cast<size_t>(q)] / ljj) * zx_[static_cast<size_t>(q)];
    zx_[static_cast<size_t>(pj)] = 1.0 / (ljj * ljj) - sdiag;
  }
}

double SelectedInverse::diag(int i) const {
  const int c = n_ - 1 - i;
  return zx_[static_cast<size_t>(zp_[static_cast<size_t>(c)])];
}

std::optional<double> SelectedInverse::entry(int i, int j) const {
  const int a = n_ - 1 - i;
  const int b = n_ - 1 - j;
  const int col = std::min(a, b);
  const int row = std::max(a, b);
  const auto begin = zi_.begin() + static_cast<std::ptrdiff_t>(zp_[static_cast<size_t>(col)]);
  const auto end = zi_.begin() + static_cast<std::ptrdiff_t>(zp_[static_cast<size_t>(col) + 1]);
  const auto it = std::lower_bound(begin, end, row);
  if (it == end || *it != row) return std::nullopt;
  return zx_[static_cast<size_t>(it - zi_.begin())];
}

}  // namespace lurk
