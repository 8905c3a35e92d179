/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#include "lurk/vecchia.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "lurk/parallel.hpp"

namespace lurk {

VecX SparseRowMatrix::mul(const VecX& x) const {
  if (x.size() != ncols) throw data_error("SparseRowMatrix::mul: dimension mismatch");
  VecX y = VecX::Zero(nrows);
  for (int r = 0; r < nrows; ++r)
    for (std::int64_t p = row_ptr[static_cast<size_t>(r)];
         p < row_ptr[static_cast<size_t>(r) + 1]; ++p)
      y[r] += vals[static_cast<size_t>(p)] * x[cols[static_cast<size_t>(p)]];
  return y;
}

VecX SparseRowMatrix::tmul(const VecX& x) const {
  if (x.size() != nrows) throw data_error("SparseRowMatrix::tmul: dimension mismatch");
  VecX y = VecX::Zero(ncols);
  for (int r = 0; r < nrows; ++r)
    for (std::int64_t p = row_ptr[static_cast<size_t>(r)];
         p < row_ptr[static_cast<size_t>(r) + 1]; ++p)
      y[cols[static_cast<size_t>(p)]] += vals[static_cast<size_t>(p)] * x[r];
  return y;
}

USpec make_uspec(const OrderingPlan& plan) {
  const int n = plan.size();
  USpec s;
  s.dim = 2 * n;
  s.n_obs = n;
  s.n_latent = n;
  s.is_z.assign(static_cast<size_t>(s.dim), 0);
  s.coord.assign(static_cast<size_t>(s.dim), 0);
  s.slot.assign(static_cast<size_t>(s.dim), 0);
  s.g.assign(static_cast<size_t>(s.dim), {});
  bool nested = true;
  for (int i = 0; i < n; ++i) {
    const int uy = 2 * i;
    const int uz = 2 * i + 1;
    s.is_z[static_cast<size_t>(uz)] = 1;
    s.coord[static_cast<size_t>(uy)] = i;
    s.coord[static_cast<size_t>(uz)] = i;
    s.slot[static_cast<size_t>(uy)] = i;
    s.slot[static_cast<size_t>(uz)] = i;
    // the response at a coordinate conditions on its own latent value only
    s.g[static_cast<size_t>(uz)] = {uy};
    auto& g = s.g[static_cast<size_t>(uy)];
    const auto& qy = plan.q_y[static_cast<size_t>(i)];
    const auto& qz = plan.q_z[static_cast<size_t>(i)];
    g.reserve(qy.size() + qz.size());
    size_t a = 0, b = 0;
    while (a < qy.size() || b < qz.size()) {
      const int uy_next = a < qy.size() ? 2 * qy[a] : s.dim;
      const int uz_next = b < qz.size() ? 2 * qz[b] + 1 : s.dim;
      if (uy_next < uz_next) {
        g.push_back(uy_next);
        ++a;
      } else {
        g.push_back(uz_next);
        ++b;
      }
    }
    if (!qz.empty() || static_cast<int>(qy.size()) != i) nested = false;
  }
  s.nested_full = nested;
  return s;
}

USpec make_uspec(const PredictionPlan& plan) {
  const int n = plan.n_obs;
  const int n_all = plan.n_all;
  USpec s;
  s.dim = n + n_all;
  s.n_obs = n;
  s.n_latent = n_all;
  s.is_z.assign(static_cast<size_t>(s.dim), 0);
  s.coord.assign(static_cast<size_t>(s.dim), 0);
  s.slot.assign(static_cast<size_t>(s.dim), 0);
  s.g.assign(static_cast<size_t>(s.dim), {});
  for (int j = 0; j < n; ++j) {
    // responses come first and are unconditioned
    s.is_z[static_cast<size_t>(j)] = 1;
    s.coord[static_cast<size_t>(j)] = j;
    s.slot[static_cast<size_t>(j)] = j;
  }
  for (int i = 0; i < n_all; ++i) {
    const int u = n + i;
    s.coord[static_cast<size_t>(u)] = i;
    s.slot[static_cast<size_t>(u)] = i;
    auto& g = s.g[static_cast<size_t>(u)];
    const auto& qz = plan.q_z[static_cast<size_t>(i)];
    const auto& qy = plan.q_y[static_cast<size_t>(i)];
    g.reserve(qz.size() + qy.size());
    for (int j : qz) g.push_back(j);          // u indices of responses
    for (int j : qy) g.push_back(n + j);      // u indices of latents, all larger
  }
  return s;
}

namespace {

//! kernel between joint-sequence entries a and b
inline double u_kernel(const USpec& s, const std::vector<ScaledCoord>& pts,
                       const CovParams& p, int a, int b) {
  const int ca = s.coord[static_cast<size_t>(a)];
  const int cb = s.coord[static_cast<size_t>(b)];
  double v = p.sigma2() * std::exp(-dist(pts[static_cast<size_t>(ca)],
                                         pts[static_cast<size_t>(cb)]));
  if (s.is_z[static_cast<size_t>(a)] && s.is_z[static_cast<size_t>(b)] && ca == cb)
    v += p.tau2();
  return v;
}

constexpr double kJitterRel = 1e-10;
constexpr int kJitterTries = 3;

[[noreturn]] void throw_singular_column(int u_idx, int coord_pos) {
  throw numeric_error(
      "build_U: non-positive conditional variance at column " +
      std::to_string(u_idx) + " (coordinate position " +
      std::to_string(coord_pos) + "); conditioning covariance numerically "
      "singular");
}

//! dense conditional regression for one column, with jitter escalation
void column_regression(const USpec& spec, const std::vector<ScaledCoord>& pts,
                       const CovParams& params, int i,
                       Eigen::VectorXd& b_out, double& r_out) {
  const auto& g = spec.g[static_cast<size_t>(i)];
  const int s = static_cast<int>(g.size());
  MatX kgg(s, s);
  VecX kgi(s);
  for (int c = 0; c < s; ++c) {
    kgi[c] = u_kernel(spec, pts, params, g[static_cast<size_t>(c)], i);
    for (int r = 0; r <= c; ++r) {
      const double v =
          u_kernel(spec, pts, params, g[static_cast<size_t>(r)], g[static_cast<size_t>(c)]);
      kgg(r, c) = v;
      kgg(c, r) = v;
    }
  }
  const double kii = u_kernel(spec, pts, params, i, i);
  double jitter = kJitterRel * kgg.trace() / s;
  for (int attempt = 0; attempt <= kJitterTries; ++attempt) {
    MatX kj = kgg;
    if (attempt > 0) kj.diagonal().array() += jitter;
    Eigen::LLT<MatX> llt(kj);
    if (llt.info() == Eigen::Success) {
      b_out = llt.solve(kgi);
      r_out = kii - b_out.dot(kgi);
      if (r_out > 0.0) return;
    }
    jitter *= 100.0;
  }
  throw_singular_column(i, spec.coord[static_cast<size_t>(i)]);
}

/*! Complete latent conditioning: every latent conditions on all previous
 *  latents. One dense Cholesky of the latent covariance yields every
 *  column's regression weights via triangular solves against its leading
 *  blocks, instead of one dense solve per column. */
SparseUpperTri build_u_nested_full(const USpec& spec,
                                   const std::vector<ScaledCoord>& pts,
                                   const CovParams& params) {
  const int n = spec.n_latent;
  MatX c(n, n);
  for (int j = 0; j < n; ++j) {
    c(j, j) = params.sigma2();
    for (int i = 0; i < j; ++i) {
      const double v = params.sigma2() * std::exp(-dist(pts[static_cast<size_t>(i)],
                                                        pts[static_cast<size_t>(j)]));
      c(i, j) = v;
      c(j, i) = v;
    }
  }
  Eigen::LLT<MatX> llt;
  double jitter = kJitterRel * params.sigma2();
  for (int attempt = 0; attempt <= kJitterTries; ++attempt) {
    MatX cj = c;
    if (attempt > 0) cj.diagonal().array() += jitter;
    llt.compute(cj);
    if (llt.info() == Eigen::Success) break;
    jitter *= 100.0;
    if (attempt == kJitterTries)
      throw numeric_error("build_U: latent covariance not positive definite");
  }
  const MatX& l = llt.matrixLLT();

  SparseUpperTri u;
  u.n = spec.dim;
  u.diag.assign(static_cast<size_t>(u.n), 0.0);
  u.col_ptr.assign(static_cast<size_t>(u.n) + 1, 0);
  for (int i = 0; i < u.n; ++i)
    u.col_ptr[static_cast<size_t>(i) + 1] =
        u.col_ptr[static_cast<size_t>(i)] +
        static_cast<std::int64_t>(spec.g[static_cast<size_t>(i)].size());
  u.rows.assign(static_cast<size_t>(u.col_ptr[static_cast<size_t>(u.n)]), 0);
  u.vals.assign(u.rows.size(), 0.0);

  const double tau2 = params.tau2();
  if (!(tau2 > 0.0)) throw_singular_column(1, 0);  // first response column
  const double inv_tau = 1.0 / std::sqrt(tau2);

  for (int i = 0; i < n; ++i) {
    const int uy = 2 * i;
    const int uz = 2 * i + 1;
    const double lii = l(i, i);
    if (!(lii > 0.0)) throw_singular_column(uy, i);
    const double d = 1.0 / lii;
    u.diag[static_cast<size_t>(uy)] = d;
    if (i > 0) {
      VecX li = l.row(i).head(i).transpose();
      l.topLeftCorner(i, i)
          .triangularView<Eigen::Lower>()
          .transpose()
          .solveInPlace(li);
      std::int64_t q = u.col_ptr[static_cast<size_t>(uy)];
      for (int j = 0; j < i; ++j, ++q) {
        u.rows[static_cast<size_t>(q)] = 2 * j;
        u.vals[static_cast<size_t>(q)] = -li[j] * d;
      }
    }
    // responses condition on their own latent value with unit weight
    u.diag[static_cast<size_t>(uz)] = inv_tau;
    const std::int64_t q = u.col_ptr[static_cast<size_t>(uz)];
    u.rows[static_cast<size_t>(q)] = uy;
    u.vals[static_cast<size_t>(q)] = -inv_tau;
  }
  return u;
}

}  // namespace

SparseUpperTri build_U(const USpec& spec, const std::vector<ScaledCoord>& pts,
                       const CovParams& params) {
  params.validate();
  if (spec.nested_full) return build_u_nested_full(spec, pts, params);

  SparseUpperTri u;
  u.n = spec.dim;
  u.diag.assign(static_cast<size_t>(u.n), 0.0);
  u.col_ptr.assign(static_cast<size_t>(u.n) + 1, 0);
  for (int i = 0; i < u.n; ++i)
    u.col_ptr[static_cast<size_t>(i) + 1] =
        u.col_ptr[static_cast<size_t>(i)] +
        static_cast<std::int64_t>(spec.g[static_cast<size_t>(i)].size());
  u.rows.assign(static_cast<size_t>(u.col_ptr[static_cast<size_t>(u.n)]), 0);
  u.vals.assign(u.rows.size(), 0.0);

  parallel_for(0, u.n, [&](int i) {
    const auto& g = spec.g[static_cast<size_t>(i)];
    if (g.empty()) {
      const double r = u_kernel(spec, pts, params, i, i);
      if (!(r > 0.0)) throw_singular_column(i, spec.coord[static_cast<size_t>(i)]);
      u.diag[static_cast<size_t>(i)] = 1.0 / std::sqrt(r);
      return;
    }
    VecX b;
    double r = 0.0;
    column_regression(spec, pts, params, i, b, r);
    const double d = 1.0 / std::sqrt(r);
    u.diag[static_cast<size_t>(i)] = d;
    std::int64_t q = u.col_ptr[static_cast<size_t>(i)];
    for (size_t j = 0; j < g.size(); ++j, ++q) {
      u.rows[static_cast<size_t>(q)] = g[j];
      u.vals[static_cast<size_t>(q)] = -b[static_cast<Eigen::Index>(j)] * d;
    }
  });
  return u;
}

SparseUpperTri build_U(const OrderingPlan& plan, const CoordSet& coords,
                       const CovParams& params) {
  const USpec spec = make_uspec(plan);
  CoordSet ordered;
  ordered.pts.reserve(plan.order.size());
  for (int idx : plan.order) ordered.pts.push_back(coords[idx]);
  return build_U(spec, scale_coords(ordered, params), params);
}

SparseUpperTri build_U(const PredictionPlan& plan, const CoordSet& obs,
                       const CoordSet& pred, const CovParams& params) {
  const USpec spec = make_uspec(plan);
  CoordSet combined = obs;
  combined.ids.clear();
  combined.pts.insert(combined.pts.end(), pred.pts.begin(), pred.pts.end());
  CoordSet ordered;
  ordered.pts.reserve(plan.order.size());
  for (int idx : plan.order) ordered.pts.push_back(combined[idx]);
  return build_U(spec, scale_coords(ordered, params), params);
}

void split_AB(const USpec& spec, const SparseUpperTri& u, SparseRowMatrix& a,
              SparseRowMatrix& b) {
  if (u.n != spec.dim) throw data_error("split_AB: dimension mismatch");
  a.nrows = spec.n_latent;
  b.nrows = spec.n_obs;
  a.ncols = b.ncols = spec.dim;
  std::vector<std::int64_t> acount(static_cast<size_t>(a.nrows) + 1, 0);
  std::vector<std::int64_t> bcount(static_cast<size_t>(b.nrows) + 1, 0);
  auto tally = [&](int urow) {
    if (spec.is_z[static_cast<size_t>(urow)])
      ++bcount[static_cast<size_t>(spec.slot[static_cast<size_t>(urow)]) + 1];
    else
      ++acount[static_cast<size_t>(spec.slot[static_cast<size_t>(urow)]) + 1];
  };
  for (int c = 0; c < u.n; ++c) {
    tally(c);
    for (std::int64_t p = u.col_ptr[static_cast<size_t>(c)];
         p < u.col_ptr[static_cast<size_t>(c) + 1]; ++p)
      tally(u.rows[static_cast<size_t>(p)]);
  }
  for (int r = 0; r < a.nrows; ++r) acount[static_cast<size_t>(r) + 1] += acount[static_cast<size_t>(r)];
  for (int r = 0; r < b.nrows; ++r) bcount[static_cast<size_t>(r) + 1] += bcount[static_cast<size_t>(r)];
  a.row_ptr = acount;
  b.row_ptr = bcount;
  a.cols.assign(static_cast<size_t>(a.row_ptr[static_cast<size_t>(a.nrows)]), 0);
  a.vals.assign(a.cols.size(), 0.0);
  b.cols.assign(static_cast<size_t>(b.row_ptr[static_cast<size_t>(b.nrows)]), 0);
  b.vals.assign(b.cols.size(), 0.0);
  std::vector<std::int64_t> anext(a.row_ptr.begin(), a.row_ptr.end() - 1);
  std::vector<std::int64_t> bnext(b.row_ptr.begin(), b.row_ptr.end() - 1);
  auto place = [&](int urow, int c, double v) {
    const int slot = spec.slot[static_cast<size_t>(urow)];
    if (spec.is_z[static_cast<size_t>(urow)]) {
      const std::int64_t q = bnext[static_cast<size_t>(slot)]++;
      b.cols[static_cast<size_t>(q)] = c;
      b.vals[static_cast<size_t>(q)] = v;
    } else {
      const std::int64_t q = anext[static_cast<size_t>(slot)]++;
      a.cols[static_cast<size_t>(q)] = c;
      a.vals[static_cast<size_t>(q)] = v;
    }
  };
  for (int c = 0; c < u.n; ++c) {
    for (std::int64_t p = u.col_ptr[static_cast<size_t>(c)];
         p < u.col_ptr[static_cast<size_t>(c) + 1]; ++p)
      place(u.rows[static_cast<size_t>(p)], c, u.vals[static_cast<size_t>(p)]);
    place(c, c, u.diag[static_cast<size_t>(c)]);
  }
}

namespace {

//! latent slots present in each U column (ascending), plus per-slot column lists
struct WCliques {
  std::vector<std::vector<int>> col_slots;   //!< per u column
  std::vector<std::vector<int>> slot_cols;   //!< per latent slot
};

WCliques w_cliques(const USpec& spec) {
  WCliques c;
  c.col_slots.assign(static_cast<size_t>(spec.dim), {});
  c.slot_cols.assign(static_cast<size_t>(spec.n_latent), {});
  for (int col = 0; col < spec.dim; ++col) {
    auto& slots = c.col_slots[static_cast<size_t>(col)];
    for (int ur : spec.g[static_cast<size_t>(col)])
      if (!spec.is_z[static_cast<size_t>(ur)])
        slots.push_back(spec.slot[static_cast<size_t>(ur)]);
    if (!spec.is_z[static_cast<size_t>(col)])
      slots.push_back(spec.slot[static_cast<size_t>(col)]);
    for (int s : slots) c.slot_cols[static_cast<size_t>(s)].push_back(col);
  }
  return c;
}

}  // namespace

SparseSym w_pattern(const USpec& spec) {
  const WCliques cliques = w_cliques(spec);
  const int n = spec.n_latent;
  SparseSym w;
  w.n = n;
  w.col_ptr.assign(static_cast<size_t>(n) + 1, 0);
  std::vector<int> mark(static_cast<size_t>(n), -1);
  // two passes: count, then fill
  for (int pass = 0; pass < 2; ++pass) {
    std::fill(mark.begin(), mark.end(), -1);
    for (int b = 0; b < n; ++b) {
      std::int64_t q = pass == 0 ? 0 : w.col_ptr[static_cast<size_t>(b)];
      std::int64_t count = 0;
      for (int col : cliques.slot_cols[static_cast<size_t>(b)]) {
        for (int a : cliques.col_slots[static_cast<size_t>(col)]) {
          if (a > b) break;  // slots ascend within a column
          if (mark[static_cast<size_t>(a)] == b) continue;
          mark[static_cast<size_t>(a)] = b;
          if (pass == 0) {
            ++count;
          } else {
            w.rows[static_cast<size_t>(q)] = a;
            ++q;
          }
        }
      }
      if (pass == 0) w.col_ptr[static_cast<size_t>(b) + 1] = count;
    }
    if (pass == 0) {
      for (int b = 0; b < n; ++b)
        w.col_ptr[static_cast<size_t>(b) + 1] += w.col_ptr[static_cast<size_t>(b)];
      w.rows.assign(static_cast<size_t>(w.col_ptr[static_cast<size_t>(n)]), 0);
    }
  }
  // ascending rows per column; the diagonal lands last automatically
  for (int b = 0; b < n; ++b)
    std::sort(w.rows.begin() + static_cast<std::ptrdiff_t>(w.col_ptr[static_cast<size_t>(b)]),
              w.rows.begin() + static_cast<std::ptrdiff_t>(w.col_ptr[static_cast<size_t>(b) + 1]));
  w.vals.assign(w.rows.size(), 0.0);
  return w;
}

void assemble_w(const USpec& spec, const SparseUpperTri& u, SparseSym& w) {
  std::fill(w.vals.begin(), w.vals.end(), 0.0);
  std::vector<int> slots;
  std::vector<double> vals;
  auto slot_of = [&](int b, int a) -> std::int64_t {
    const auto begin = w.rows.begin() + static_cast<std::ptrdiff_t>(w.col_ptr[static_cast<size_t>(b)]);
    const auto end = w.rows.begin() + static_cast<std::ptrdiff_t>(w.col_ptr[static_cast<size_t>(b) + 1]);
    const auto it = std::lower_bound(begin, end, a);
    if (it == end || *it != a)
      throw numeric_error("assemble_w: entry outside symbolic pattern");
    return it - w.rows.begin();
  };
  for (int c = 0; c < u.n; ++c) {
    slots.clear();
    vals.clear();
    for (std::int64_t p = u.col_ptr[static_cast<size_t>(c)];
         p < u.col_ptr[static_cast<size_t>(c) + 1]; ++p) {
      const int ur = u.rows[static_cast<size_t>(p)];
      if (!spec.is_z[static_cast<size_t>(ur)]) {
        slots.push_back(spec.slot[static_cast<size_t>(ur)]);
        vals.push_back(u.vals[static_cast<size_t>(p)]);
      }
    }
    if (!spec.is_z[static_cast<size_t>(c)]) {
      slots.push_back(spec.slot[static_cast<size_t>(c)]);
      vals.push_back(u.diag[static_cast<size_t>(c)]);
    }
    for (size_t jb = 0; jb < slots.size(); ++jb)
      for (size_t ja = 0; ja <= jb; ++ja)
        w.vals[static_cast<size_t>(slot_of(slots[jb], slots[ja]))] += vals[ja] * vals[jb];
  }
}

// ---------------------------------------------------------------------------
// VecchiaFactor products

VecX VecchiaFactor::bt_mul(const VecX& x) const {
  const USpec& s = *spec;
  if (x.size() != s.n_obs) throw data_error("bt_mul: dimension mismatch");
  VecX out = VecX::Zero(s.dim);
  for (int c = 0; c < s.dim; ++c) {
    double acc = 0.0;
    for (std::int64_t p = U.col_ptr[static_cast<size_t>(c)];
         p < U.col_ptr[static_cast<size_t>(c) + 1]; ++p) {
      const int r = U.rows[static_cast<size_t>(p)];
      if (s.is_z[static_cast<size_t>(r)])
        acc += U.vals[static_cast<size_t>(p)] * x[s.slot[static_cast<size_t>(r)]];
    }
    if (s.is_z[static_cast<size_t>(c)])
      acc += U.diag[static_cast<size_t>(c)] * x[s.slot[static_cast<size_t>(c)]];
    out[c] = acc;
  }
  return out;
}

VecX VecchiaFactor::at_mul(const VecX& y) const {
  const USpec& s = *spec;
  if (y.size() != s.n_latent) throw data_error("at_mul: dimension mismatch");
  VecX out = VecX::Zero(s.dim);
  for (int c = 0; c < s.dim; ++c) {
    double acc = 0.0;
    for (std::int64_t p = U.col_ptr[static_cast<size_t>(c)];
         p < U.col_ptr[static_cast<size_t>(c) + 1]; ++p) {
      const int r = U.rows[static_cast<size_t>(p)];
      if (!s.is_z[static_cast<size_t>(r)])
        acc += U.vals[static_cast<size_t>(p)] * y[s.slot[static_cast<size_t>(r)]];
    }
    if (!s.is_z[static_cast<size_t>(c)])
      acc += U.diag[static_cast<size_t>(c)] * y[s.slot[static_cast<size_t>(c)]];
    out[c] = acc;
  }
  return out;
}

VecX VecchiaFactor::a_mul(const VecX& v) const {
  const USpec& s = *spec;
  if (v.size() != s.dim) throw data_error("a_mul: dimension mismatch");
  VecX out = VecX::Zero(s.n_latent);
  for (int c = 0; c < s.dim; ++c) {
    const double vc = v[c];
    if (vc == 0.0) continue;
    for (std::int64_t p = U.col_ptr[static_cast<size_t>(c)];
         p < U.col_ptr[static_cast<size_t>(c) + 1]; ++p) {
      const int r = U.rows[static_cast<size_t>(p)];
      if (!s.is_z[static_cast<size_t>(r)])
        out[s.slot[static_cast<size_t>(r)]] += U.vals[static_cast<size_t>(p)] * vc;
    }
    if (!s.is_z[static_cast<size_t>(c)])
      out[s.slot[static_cast<size_t>(c)]] += U.diag[static_cast<size_t>(c)] * vc;
  }
  return out;
}

VecX VecchiaFactor::b_mul(const VecX& v) const {
  const USpec& s = *spec;
  if (v.size() != s.dim) throw data_error("b_mul: dimension mismatch");
  VecX out = VecX::Zero(s.n_obs);
  for (int c = 0; c < s.dim; ++c) {
    const double vc = v[c];
    if (vc == 0.0) continue;
    for (std::int64_t p = U.col_ptr[static_cast<size_t>(c)];
         p < U.col_ptr[static_cast<size_t>(c) + 1]; ++p) {
      const int r = U.rows[static_cast<size_t>(p)];
      if (s.is_z[static_cast<size_t>(r)])
        out[s.slot[static_cast<size_t>(r)]] += U.vals[static_cast<size_t>(p)] * vc;
    }
    if (s.is_z[static_cast<size_t>(c)])
      out[s.slot[static_cast<size_t>(c)]] += U.diag[static_cast<size_t>(c)] * vc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// FactorTemplate

FactorTemplate::FactorTemplate(const OrderingPlan& plan, const CoordSet& coords)
    : spec_(make_uspec(plan)), order_(plan.order) {
  plan_coords_.pts.reserve(order_.size());
  for (int idx : order_) plan_coords_.pts.push_back(coords[idx]);
  finish_setup();
}

FactorTemplate::FactorTemplate(const PredictionPlan& plan, const CoordSet& obs,
                               const CoordSet& pred)
    : spec_(make_uspec(plan)), order_(plan.order) {
  plan_coords_.pts.reserve(order_.size());
  for (int idx : order_) {
    plan_coords_.pts.push_back(idx < obs.size() ? obs[idx]
                                                : pred[idx - obs.size()]);
  }
  finish_setup();
}

void FactorTemplate::finish_setup() {
  w_pattern_ = w_pattern(spec_);
  chol_proto_ = std::make_unique<ReverseCholesky>(w_pattern_);
}

VecchiaFactor FactorTemplate::build(const CovParams& params) const {
  VecchiaFactor f{&spec_, params, {}, w_pattern_, *chol_proto_};
  f.U = build_U(spec_, scale_coords(plan_coords_, params), params);
  assemble_w(spec_, f.U, f.W);
  f.chol.factor(f.W);
  return f;
}

}  // namespace lurk
