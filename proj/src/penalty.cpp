/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#include "lurk/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lurk/parallel.hpp"
#include "lurk/rng.hpp"

namespace lurk {

double scad_value(double beta_j, const ScadParams& p) {
  const double ab = std::abs(beta_j);
  if (ab <= p.lambda) return p.lambda * ab;
  if (ab <= p.a * p.lambda)
    return (2.0 * p.a * p.lambda * ab - ab * ab - p.lambda * p.lambda) /
           (2.0 * (p.a - 1.0));
  return p.lambda * p.lambda * (p.a + 1.0) / 2.0;
}

double scad_penalty(const VecX& beta, const ScadParams& p) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) s += scad_value(beta[j], p);
  return s;
}

namespace {
inline double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}
}  // namespace

double scad_threshold(double z_j, const ScadParams& p) {
  const double az = std::abs(z_j);
  if (az <= 2.0 * p.lambda) return soft_threshold(z_j, p.lambda);
  if (az <= p.a * p.lambda)
    return soft_threshold(z_j, p.a * p.lambda / (p.a - 1.0)) /
           (1.0 - 1.0 / (p.a - 1.0));
  return z_j;
}

namespace {

/*! Column statistics shared by the solver and the objective: optional
 *  centering plus scaling to unit second moment. Zero-variation columns are
 *  flagged inactive and pinned at zero. */
struct ColumnPrep {
  VecX mean;    // zero when centering is off
  VecX scale;   // unit-second-moment divisor
  std::vector<char> active;
  double z_mean = 0.0;
  int intercept = -1;
  bool center = false;
};

ColumnPrep prep_columns(const MatX& x, const VecX& z, const CdOptions& opts) {
  const Eigen::Index n = x.rows(), p = x.cols();
  if (n == 0 || p == 0) throw data_error("coordinate_descent: empty problem");
  if (opts.center && opts.intercept_col < 0)
    throw data_error("coordinate_descent: centering requires an intercept column");
  ColumnPrep cp;
  cp.center = opts.center;
  cp.intercept = opts.intercept_col;
  cp.mean = VecX::Zero(p);
  cp.scale = VecX::Ones(p);
  cp.active.assign(static_cast<size_t>(p), 1);
  cp.z_mean = opts.center ? z.mean() : 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (opts.center && j == opts.intercept_col) {
      cp.active[static_cast<size_t>(j)] = 0;  // recovered analytically
      continue;
    }
    if (opts.center) cp.mean[j] = x.col(j).mean();
    const double ms =
        (x.col(j).squaredNorm() - static_cast<double>(n) * cp.mean[j] * cp.mean[j]) /
        static_cast<double>(n);
    if (ms <= 0.0 || !std::isfinite(ms)) {
      cp.active[static_cast<size_t>(j)] = 0;
      continue;
    }
    cp.scale[j] = std::sqrt(ms);
  }
  return cp;
}

}  // namespace

CdResult coordinate_descent(const MatX& x, const VecX& z, const ScadParams& p,
                            const VecX& beta0, const CdOptions& opts) {
  p.validate();
  const Eigen::Index n = x.rows();
  const Eigen::Index np = x.cols();
  if (z.size() != n || beta0.size() != np)
    throw data_error("coordinate_descent: dimension mismatch");
  const ColumnPrep cp = prep_columns(x, z, opts);
  const double dn = static_cast<double>(n);

  // work on the standardized scale: b_std = b * scale
  VecX bstd = VecX::Zero(np);
  for (Eigen::Index j = 0; j < np; ++j)
    if (cp.active[static_cast<size_t>(j)]) bstd[j] = beta0[j] * cp.scale[j];

  VecX r = z;
  if (cp.center) r.array() -= cp.z_mean;
  for (Eigen::Index j = 0; j < np; ++j) {
    if (!cp.active[static_cast<size_t>(j)] || bstd[j] == 0.0) continue;
    const double b = bstd[j] / cp.scale[j];
    r -= x.col(j) * b;
    if (cp.center) r.array() += cp.mean[j] * b;
  }

  CdResult res;
  res.beta = VecX::Zero(np);
  bool converged = false;
  int cycle = 0;
  for (; cycle < opts.max_cycles && !converged; ++cycle) {
    double max_delta = 0.0;
    for (Eigen::Index j = 0; j < np; ++j) {
      if (!cp.active[static_cast<size_t>(j)]) continue;
      double dot = x.col(j).dot(r);
      if (cp.center && cp.mean[j] != 0.0) dot -= cp.mean[j] * r.sum();
      const double u = dot / (dn * cp.scale[j]) + bstd[j];
      const bool penalized = j != opts.intercept_col;
      const double bnew = penalized ? scad_threshold(u, p) : u;
      const double delta = bnew - bstd[j];
      if (delta != 0.0) {
        const double db = delta / cp.scale[j];
        r -= x.col(j) * db;
        if (cp.center) r.array() += cp.mean[j] * db;
        bstd[j] = bnew;
        max_delta = std::max(max_delta, std::abs(delta));
      }
    }
    if (opts.track_objective) {
      double pen = 0.0;
      for (Eigen::Index j = 0; j < np; ++j)
        if (j != opts.intercept_col && cp.active[static_cast<size_t>(j)])
          pen += scad_value(bstd[j], p);
      res.objective_trace.push_back(0.5 * r.squaredNorm() / dn + pen);
    }
    if (max_delta < opts.tol) converged = true;
  }
  res.cycles = cycle;
  res.converged = converged;
  res.hit_max_cycles = !converged;

  for (Eigen::Index j = 0; j < np; ++j)
    if (cp.active[static_cast<size_t>(j)]) res.beta[j] = bstd[j] / cp.scale[j];
  if (cp.center) {
    double b0 = cp.z_mean;
    for (Eigen::Index j = 0; j < np; ++j)
      if (cp.active[static_cast<size_t>(j)]) b0 -= res.beta[j] * cp.mean[j];
    res.beta[opts.intercept_col] = b0;
  }
  return res;
}

double cd_objective(const MatX& x, const VecX& z, const ScadParams& p,
                    const VecX& beta, const CdOptions& opts) {
  const ColumnPrep cp = prep_columns(x, z, opts);
  VecX r = z - x * beta;
  double pen = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    if (j != opts.intercept_col && cp.active[static_cast<size_t>(j)])
      pen += scad_value(beta[j] * cp.scale[j], p);
  return 0.5 * r.squaredNorm() / static_cast<double>(x.rows()) + pen;
}

namespace {

//! residual after fitting only the unpenalized intercept (if any)
VecX base_residual(const MatX& x, const VecX& z, const CdOptions& opts) {
  VecX r = z;
  if (opts.center) {
    r.array() -= z.mean();
  } else if (opts.intercept_col >= 0) {
    const auto col = x.col(opts.intercept_col);
    const double ss = col.squaredNorm();
    if (ss > 0.0) r -= col * (col.dot(z) / ss);
  }
  return r;
}

double lambda_max_from(const MatX& x, const VecX& r, const ColumnPrep& cp,
                       const CdOptions& opts) {
  double lmax = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (!cp.active[static_cast<size_t>(j)] || j == opts.intercept_col) continue;
    double dot = x.col(j).dot(r);
    if (cp.center && cp.mean[j] != 0.0) dot -= cp.mean[j] * r.sum();
    lmax = std::max(lmax, std::abs(dot) / (static_cast<double>(x.rows()) * cp.scale[j]));
  }
  return lmax;
}

}  // namespace

SolutionPath select_lambda_cv(const MatX& x, const VecX& z,
                              const CvOptions& opts, const VecX* warm) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (opts.k_folds < 2) throw data_error("select_lambda_cv: need at least 2 folds");
  if (n < opts.k_folds)
    throw data_error("select_lambda_cv: fewer rows than folds (degenerate folds)");
  ScadParams sp{opts.scad_a, 0.0};
  sp.validate();

  const ColumnPrep cp = prep_columns(x, z, opts.cd);
  const VecX r0 = base_residual(x, z, opts.cd);
  double lmax = lambda_max_from(x, r0, cp, opts.cd) * (1.0 + 1e-10);
  if (!(lmax > 0.0)) lmax = 1e-8;  // fully degenerate response: flat path

  SolutionPath path;
  path.n_rows = static_cast<int>(n);
  path.lambdas = VecX(opts.n_lambda);
  const double ratio = std::pow(opts.lambda_min_ratio,
                                1.0 / std::max(1, opts.n_lambda - 1));
  for (int k = 0; k < opts.n_lambda; ++k)
    path.lambdas[k] = lmax * std::pow(ratio, k);

  // fold assignment: seeded shuffle, contiguous blocks
  RandomStream rng(derive_seed(opts.seed, "cv-folds"));
  std::vector<int> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);

  VecX cv_sse = VecX::Zero(opts.n_lambda);
  std::vector<VecX> fold_sse(static_cast<size_t>(opts.k_folds),
                             VecX::Zero(opts.n_lambda));
  parallel_for(0, opts.k_folds, [&](int f) {
    const std::int64_t lo = static_cast<std::int64_t>(n) * f / opts.k_folds;
    const std::int64_t hi = static_cast<std::int64_t>(n) * (f + 1) / opts.k_folds;
    const Eigen::Index n_test = static_cast<Eigen::Index>(hi - lo);
    const Eigen::Index n_train = n - n_test;
    MatX x_train(n_train, p), x_test(n_test, p);
    VecX z_train(n_train), z_test(n_test);
    Eigen::Index a = 0, b = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int row = perm[static_cast<size_t>(i)];
      if (i >= lo && i < hi) {
        x_test.row(b) = x.row(row);
        z_test[b] = z[row];
        ++b;
      } else {
        x_train.row(a) = x.row(row);
        z_train[a] = z[row];
        ++a;
      }
    }
    VecX beta = warm ? *warm : VecX::Zero(p);
    for (int k = 0; k < opts.n_lambda; ++k) {
      ScadParams pk{opts.scad_a, path.lambdas[k]};
      const CdResult fit = coordinate_descent(x_train, z_train, pk, beta, opts.cd);
      beta = fit.beta;  // warm start down the path
      fold_sse[static_cast<size_t>(f)][k] =
          (z_test - x_test * beta).squaredNorm();
    }
  });
  for (const auto& s : fold_sse) cv_sse += s;
  path.cv_mse = cv_sse / static_cast<double>(n);

  int best = 0;
  for (int k = 1; k < opts.n_lambda; ++k)
    if (path.cv_mse[k] < path.cv_mse[best]) best = k;
  path.selected = best;
  path.lambda_hat = path.lambdas[best];

  // full-data path down to the selected lambda
  path.betas = MatX::Zero(p, opts.n_lambda);
  path.nnz.assign(static_cast<size_t>(opts.n_lambda), 0);
  VecX beta = warm ? *warm : VecX::Zero(p);
  long long cycles = 0;
  for (int k = 0; k < opts.n_lambda; ++k) {
    ScadParams pk{opts.scad_a, path.lambdas[k]};
    const CdResult fit = coordinate_descent(x, z, pk, beta, opts.cd);
    beta = fit.beta;
    cycles += fit.cycles;
    path.betas.col(k) = beta;
    int nz = 0;
    for (Eigen::Index j = 0; j < p; ++j)
      if (j != opts.cd.intercept_col && beta[j] != 0.0) ++nz;
    path.nnz[static_cast<size_t>(k)] = nz;
  }
  path.total_cycles = cycles;
  path.beta_hat = path.betas.col(best);
  path.beta_hat_std = path.beta_hat;
  for (Eigen::Index j = 0; j < p; ++j)
    if (cp.active[static_cast<size_t>(j)]) path.beta_hat_std[j] *= cp.scale[j];
  return path;
}

}  // namespace lurk
