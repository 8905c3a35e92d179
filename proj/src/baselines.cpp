/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#include "lurk/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "lurk/geometry.hpp"
#include "lurk/nelder_mead.hpp"
#include "lurk/parallel.hpp"
#include "lurk/rng.hpp"

namespace lurk {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogParamBound = 30.0;
}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::lurk_vecchia: return "lurk-vecchia";
    case Method::lurk_full: return "lurk-full";
    case Method::lurk_local: return "lurk-local";
    case Method::lur_iid: return "lur-iid";
    case Method::local_kriging: return "local-kriging";
  }
  return "unknown";
}

std::optional<Method> parse_method(const std::string& name) {
  if (name == "lurk-vecchia") return Method::lurk_vecchia;
  if (name == "lurk-full") return Method::lurk_full;
  if (name == "lurk-local") return Method::lurk_local;
  if (name == "lur-iid") return Method::lur_iid;
  if (name == "local-kriging") return Method::local_kriging;
  return std::nullopt;
}

CovParams dense_ml_zero_mean(const VecX& values, const CoordSet& coords,
                             const std::vector<int>& rows,
                             const CovParams& theta0, int max_evals) {
  const int l = static_cast<int>(rows.size());
  CoordSet sub;
  sub.pts.reserve(rows.size());
  VecX v(l);
  for (int i = 0; i < l; ++i) {
    sub.pts.push_back(coords[rows[static_cast<size_t>(i)]]);
    v[i] = values[rows[static_cast<size_t>(i)]];
  }
  auto objective = [&](const VecX& x) -> double {
    for (int i = 0; i < 4; ++i)
      if (std::abs(x[i]) > kLogParamBound) return kInf;
    const CovParams t{std::exp(x[0]), std::exp(x[1]), std::exp(x[2]),
                      std::exp(x[3])};
    const MatX sigma = dense_observed_cov(sub, t);
    Eigen::LLT<MatX> llt(sigma);
    if (llt.info() != Eigen::Success) return kInf;
    double logdet = 0.0;
    for (int i = 0; i < l; ++i) logdet += std::log(llt.matrixLLT()(i, i));
    const VecX alpha = llt.solve(v);
    return v.dot(alpha) + 2.0 * logdet;
  };
  VecX x0(4);
  x0 << std::log(theta0.sigma), std::log(theta0.gamma_s),
      std::log(theta0.gamma_t), std::log(theta0.tau);
  NelderMeadOptions opts;
  opts.max_evals = max_evals;
  const NelderMeadResult r = nelder_mead(objective, x0, opts);
  if (!std::isfinite(r.f))
    throw numeric_error("dense_ml_zero_mean: likelihood non-finite everywhere");
  return CovParams{std::exp(r.x[0]), std::exp(r.x[1]), std::exp(r.x[2]),
                   std::exp(r.x[3])};
}

namespace {

//! moment-based theta start shared by the subsample baselines
CovParams moment_theta(const VecX& resid, const CoordSet& coords) {
  double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf, tmin = kInf,
         tmax = -kInf;
  for (const auto& c : coords.pts) {
    xmin = std::min(xmin, c.x);
    xmax = std::max(xmax, c.x);
    ymin = std::min(ymin, c.y);
    ymax = std::max(ymax, c.y);
    tmin = std::min(tmin, c.t);
    tmax = std::max(tmax, c.t);
  }
  const double diag =
      std::sqrt((xmax - xmin) * (xmax - xmin) + (ymax - ymin) * (ymax - ymin));
  const double mean = resid.mean();
  const double v = (resid.array() - mean).square().sum() /
                   static_cast<double>(std::max<Eigen::Index>(1, resid.size() - 1));
  CovParams t;
  t.sigma = t.tau = v > 0.0 ? std::sqrt(v / 2.0) : 1e-6;
  t.gamma_s = diag > 0.0 ? 0.2 * diag : 1.0;
  const double span = tmax - tmin;
  t.gamma_t = span > 0.0 ? 0.2 * span : 1.0;
  return t;
}

/*! Subsample-averaged covariance parameters: k draws of size l, each fit by
 *  dense maximum likelihood, failed draws redrawn up to 3 times. */
CovParams subsample_theta(const VecX& resid, const CoordSet& coords,
                          const LocalOptions& opt) {
  const int n = static_cast<int>(resid.size());
  const CovParams fallback = moment_theta(resid, coords);
  const double rvar = (resid.array() - resid.mean()).square().sum() /
                      static_cast<double>(std::max(1, n - 1));
  if (!(rvar > 0.0)) return fallback;  // degenerate field, kriging is exact anyway
  const int l = std::min<int>(
      n, static_cast<int>(std::llround(std::cbrt(
             static_cast<double>(opt.m) * static_cast<double>(n) / opt.k))));
  if (l < 4)
    throw data_error(
        "subsample covariance estimation: subsample size below 4; increase n or m");
  const CovParams theta0 = moment_theta(resid, coords);
  RandomStream rng(derive_seed(opt.seed, "subsample-theta"));
  VecX acc = VecX::Zero(4);
  for (int j = 0; j < opt.k; ++j) {
    bool ok = false;
    for (int attempt = 0; attempt < 4 && !ok; ++attempt) {
      const std::vector<int> rows = rng.sample_without_replacement(n, l);
      try {
        const CovParams t = dense_ml_zero_mean(resid, coords, rows, theta0, opt.nm_evals);
        if (!t.valid()) continue;
        if (opt.log_scale_mean) {
          acc[0] += std::log(t.sigma);
          acc[1] += std::log(t.gamma_s);
          acc[2] += std::log(t.gamma_t);
          acc[3] += std::log(std::max(t.tau, 1e-12));
        } else {
          acc[0] += t.sigma;
          acc[1] += t.gamma_s;
          acc[2] += t.gamma_t;
          acc[3] += t.tau;
        }
        ok = true;
      } catch (const numeric_error&) {
      }
    }
    if (!ok)
      throw numeric_error(
          "subsample covariance estimation failed after repeated redraws");
  }
  acc /= static_cast<double>(opt.k);
  if (opt.log_scale_mean)
    return CovParams{std::exp(acc[0]), std::exp(acc[1]), std::exp(acc[2]),
                     std::exp(acc[3])};
  return CovParams{acc[0], acc[1], acc[2], acc[3]};
}

/*! Simple kriging of a zero-mean field from the m nearest training rows
 *  under the scaled metric. */
void local_krige(const VecX& resid, const CoordSet& coords,
                 const CovParams& theta, int m, const CoordSet& pred_coords,
                 VecX& mu, VecX& var) {
  const int n = coords.size();
  const int n_pred = pred_coords.size();
  const int k = std::min(m, n);
  mu.resize(n_pred);
  var.resize(n_pred);
  const std::vector<ScaledCoord> sc = scale_coords(coords, theta);
  CoordSet pc = pred_coords;
  const std::vector<ScaledCoord> sp = scale_coords(pc, theta);
  parallel_for(0, n_pred, [&](int q) {
    std::vector<std::pair<double, int>> cand(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      cand[static_cast<size_t>(i)] = {dist(sp[static_cast<size_t>(q)], sc[static_cast<size_t>(i)]), i};
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    CoordSet local;
    local.pts.reserve(static_cast<size_t>(k));
    VecX rloc(k);
    for (int i = 0; i < k; ++i) {
      local.pts.push_back(coords[cand[static_cast<size_t>(i)].second]);
      rloc[i] = resid[cand[static_cast<size_t>(i)].second];
    }
    const MatX sigma = dense_observed_cov(local, theta);
    VecX c(k);
    for (int i = 0; i < k; ++i)
      c[i] = cov_latent(pred_coords[q], local[i], theta);
    Eigen::LLT<MatX> llt(sigma);
    if (llt.info() != Eigen::Success)
      throw numeric_error("local kriging: covariance not positive definite");
    const VecX alpha = llt.solve(rloc);
    const VecX w = llt.solve(c);
    mu[q] = c.dot(alpha);
    var[q] = std::max(theta.sigma2() - c.dot(w), 1e-12 * theta.sigma2());
  });
}

//! shared iid SCAD machinery: standardized design with leading intercept
struct IidFit {
  VecX beta_aug;  // intercept first, standardized scale
  VecX col_mean, col_sd;
  double lambda = 0.0;
  double mse = 0.0;
};

IidFit iid_scad(const VecX& z, const MatX& x, const LocalOptions& opt) {
  const Eigen::Index n = z.size();
  const Eigen::Index p = x.cols();
  if (x.rows() != n) throw data_error("fit_lur_iid: row mismatch");
  IidFit f;
  f.col_mean = VecX::Zero(p);
  f.col_sd = VecX::Ones(p);
  MatX xs(n, p + 1);
  xs.col(0).setOnes();
  for (Eigen::Index j = 0; j < p; ++j) {
    f.col_mean[j] = x.col(j).mean();
    const double sd =
        std::sqrt((x.col(j).array() - f.col_mean[j]).square().sum() /
                  static_cast<double>(n - 1));
    if (!(sd > 0.0))
      throw data_error("fit_lur_iid: covariate has zero variance: column " +
                       std::to_string(j));
    f.col_sd[j] = sd;
    xs.col(j + 1) = (x.col(j).array() - f.col_mean[j]) / f.col_sd[j];
  }
  CvOptions cv;
  cv.n_lambda = opt.n_lambda;
  cv.lambda_min_ratio = opt.lambda_min_ratio;
  cv.k_folds = opt.cv_folds;
  cv.seed = derive_seed(opt.seed, "iid-cv");
  cv.cd = opt.cd;
  cv.cd.center = true;
  cv.cd.intercept_col = 0;
  const SolutionPath path = select_lambda_cv(xs, z, cv);
  f.beta_aug = path.beta_hat;
  f.lambda = path.lambda_hat;
  const VecX resid = z - xs * f.beta_aug;
  f.mse = resid.squaredNorm() / static_cast<double>(n);
  return f;
}

void fill_trend(BaselineFit& out, const IidFit& f) {
  const Eigen::Index p = f.col_mean.size();
  out.beta = f.beta_aug.tail(p);
  out.lambda = f.lambda;
  out.resid_mse = f.mse;
  out.beta_raw = VecX(p);
  double b0 = f.beta_aug[0];
  for (Eigen::Index j = 0; j < p; ++j) {
    out.beta_raw[j] = out.beta[j] / f.col_sd[j];
    b0 -= out.beta[j] * f.col_mean[j] / f.col_sd[j];
  }
  out.intercept_raw = b0;
}

}  // namespace

BaselineFit fit_lur_iid(const VecX& z, const MatX& x, const LocalOptions& opt) {
  BaselineFit out;
  out.method = Method::lur_iid;
  out.m = opt.m;
  const IidFit f = iid_scad(z, x, opt);
  fill_trend(out, f);
  out.theta = CovParams{1e-8, 1.0, 1.0, std::sqrt(out.resid_mse)};
  out.z_train = z;
  out.x_train = x;
  return out;
}

BaselineFit fit_lurk_local(const VecX& z, const CoordSet& coords, const MatX& x,
                           const LocalOptions& opt) {
  BaselineFit out;
  out.method = Method::lurk_local;
  out.m = opt.m;
  const IidFit f = iid_scad(z, x, opt);  // model selection identical to lur-iid
  fill_trend(out, f);
  out.z_train = z;
  out.x_train = x;
  out.train_coords = coords;
  out.train_resid = z - ((x * out.beta_raw).array() + out.intercept_raw).matrix();
  out.theta = subsample_theta(out.train_resid, coords, opt);
  return out;
}

BaselineFit fit_local_kriging(const VecX& z, const CoordSet& coords,
                              const LocalOptions& opt) {
  BaselineFit out;
  out.method = Method::local_kriging;
  out.m = opt.m;
  out.z_mean = z.mean();
  out.z_train = z;
  out.train_coords = coords;
  out.train_resid = z.array() - out.z_mean;
  out.theta = subsample_theta(out.train_resid, coords, opt);
  return out;
}

BaselineFit fit_lurk_full(const VecX& z, const CoordSet& coords, const MatX& x,
                          EstimationConfig cfg) {
  const int n = coords.size();
  if (n > 2000)
    throw data_error(
        "lurk-full is dense and guarded to n <= 2000; use lurk-vecchia for "
        "larger data");
  cfg.m = n - 1;
  BaselineFit out;
  out.method = Method::lurk_full;
  out.m = cfg.m;
  out.vecchia = fit(z, coords, x, cfg);
  out.theta = out.vecchia->theta;
  out.lambda = out.vecchia->lambda;
  out.beta = out.vecchia->beta;
  out.beta_raw = out.vecchia->beta_raw;
  out.intercept_raw = out.vecchia->intercept_raw;
  out.z_train = z;
  out.x_train = x;
  out.train_coords = coords;
  return out;
}

BaselineFit fit_lurk_vecchia(const VecX& z, const CoordSet& coords,
                             const MatX& x, const EstimationConfig& cfg) {
  BaselineFit out;
  out.method = Method::lurk_vecchia;
  out.m = cfg.m;
  out.vecchia = fit(z, coords, x, cfg);
  out.theta = out.vecchia->theta;
  out.lambda = out.vecchia->lambda;
  out.beta = out.vecchia->beta;
  out.beta_raw = out.vecchia->beta_raw;
  out.intercept_raw = out.vecchia->intercept_raw;
  out.z_train = z;
  out.x_train = x;
  out.train_coords = coords;
  return out;
}

PredictionResult BaselineFit::predict_at(const CoordSet& pred_coords,
                                         const MatX& x_pred) const {
  PredictionResult out;
  const int n_pred = pred_coords.size();
  if (n_pred == 0) return out;
  switch (method) {
    case Method::lurk_vecchia:
    case Method::lurk_full:
      return predict(*vecchia, z_train, train_coords, x_train, pred_coords,
                     x_pred, m);
    case Method::lur_iid: {
      if (x_pred.cols() != beta_raw.size())
        throw data_error("predict: covariate mismatch");
      out.mu = ((x_pred * beta_raw).array() + intercept_raw).matrix();
      // the residual mean square is the full predictive variance here; the
      // model has no separate noise component
      out.var = VecX::Constant(n_pred, resid_mse);
      out.var_noisy = out.var;
      return out;
    }
    case Method::lurk_local: {
      if (x_pred.cols() != beta_raw.size())
        throw data_error("predict: covariate mismatch");
      VecX mu_r, var_r;
      local_krige(train_resid, train_coords, theta, m, pred_coords, mu_r, var_r);
      out.mu = ((x_pred * beta_raw).array() + intercept_raw).matrix() + mu_r;
      out.var = var_r;
      out.var_noisy = var_r.array() + theta.tau2();
      return out;
    }
    case Method::local_kriging: {
      VecX mu_r, var_r;
      local_krige(train_resid, train_coords, theta, m, pred_coords, mu_r, var_r);
      out.mu = mu_r.array() + z_mean;
      out.var = var_r;
      out.var_noisy = var_r.array() + theta.tau2();
      return out;
    }
  }
  throw data_error("predict: unknown method");
}

VecX BaselineFit::selection_beta() const {
  if (method == Method::local_kriging) return VecX();
  return beta;
}

}  // namespace lurk
