/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#include "lurk/estimate.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "lurk/rng.hpp"

namespace lurk {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogParamBound = 30.0;  // reject absurd scales, keeps exp finite

VecX permute(const VecX& v, const std::vector<int>& order) {
  VecX out(static_cast<Eigen::Index>(order.size()));
  for (size_t i = 0; i < order.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[order[i]];
  return out;
}

MatX permute_rows(const MatX& m, const std::vector<int>& order) {
  MatX out(static_cast<Eigen::Index>(order.size()), m.cols());
  for (size_t i = 0; i < order.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(order[i]);
  return out;
}

CovParams theta_from_log(const VecX& x) {
  return CovParams{std::exp(x[0]), std::exp(x[1]), std::exp(x[2]), std::exp(x[3])};
}

VecX log_from_theta(const CovParams& t) {
  VecX x(4);
  x << std::log(t.sigma), std::log(t.gamma_s), std::log(t.gamma_t), std::log(t.tau);
  return x;
}

}  // namespace

int FitResult::nnz() const {
  int k = 0;
  for (Eigen::Index j = 0; j < beta.size(); ++j)
    if (beta[j] != 0.0) ++k;
  return k;
}

VecX FitResult::linear_predictor(const MatX& x_raw) const {
  if (x_raw.cols() != beta_raw.size())
    throw data_error("linear_predictor: covariate count mismatch");
  return (x_raw * beta_raw).array() + intercept_raw;
}

CovParams initialize_theta(const VecX& z, const MatX& x, const CoordSet& coords) {
  const Eigen::Index n = z.size();
  if (n < 10) throw data_error("initialize_theta: need at least 10 observations");
  const VecX beta_ls = x.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(z);
  const VecX r = z - x * beta_ls;
  const double rc = r.mean();
  const double v = (r.array() - rc).square().sum() / static_cast<double>(n - 1);
  if (!(v > 0.0))
    throw numeric_error("initialize_theta: zero-variance response after trend removal");

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
  CovParams t;
  t.sigma = std::sqrt(v / 2.0);
  t.tau = std::sqrt(v / 2.0);
  t.gamma_s = diag > 0.0 ? 0.2 * diag : 1.0;
  const double span = tmax - tmin;
  t.gamma_t = span > 0.0 ? 0.2 * span : 1.0;
  return t;
}

CovParams optimize_theta(const FactorTemplate& tmpl, const VecX& residual_plan,
                         const CovParams& theta0, const NelderMeadOptions& opts,
                         int* evals_out) {
  auto objective = [&](const VecX& x) -> double {
    for (int i = 0; i < 4; ++i)
      if (std::abs(x[i]) > kLogParamBound) return kInf;
    const CovParams t = theta_from_log(x);
    try {
      const VecchiaFactor f = tmpl.build(t);
      return neg2loglik_direct(f, residual_plan);
    } catch (const numeric_error&) {
      return kInf;
    }
  };
  const NelderMeadResult r = nelder_mead(objective, log_from_theta(theta0), opts);
  if (evals_out) *evals_out = r.evals;
  if (!std::isfinite(r.f))
    throw numeric_error(
        "optimize_theta: objective non-finite at every evaluated point");
  return theta_from_log(r.x);
}

FitResult fit(const VecX& z, const CoordSet& coords, const MatX& x,
              const EstimationConfig& cfg,
              const std::vector<std::string>& col_names) {
  const auto t_start = std::chrono::steady_clock::now();
  const Eigen::Index n = z.size();
  const Eigen::Index p = x.cols();
  if (coords.size() != n || x.rows() != n)
    throw data_error("fit: rows of z, coords and X must match");
  if (p < 1) throw data_error("fit: need at least one covariate");
  if (!z.allFinite() || !x.allFinite())
    throw data_error("fit: missing or non-finite values in input");
  coords.validate();
  if (!(cfg.tol > 0.0)) throw data_error("fit: tol must be positive");
  if (cfg.m < 0) throw data_error("fit: m must be >= 0");

  FitResult res;
  res.m = cfg.m;
  res.seed = cfg.seed;
  res.col_names = col_names;

  // standardize covariates; the intercept is an unpenalized leading column
  res.col_mean = VecX::Zero(p);
  res.col_sd = VecX::Ones(p);
  MatX xs(n, p + 1);
  xs.col(0).setOnes();
  for (Eigen::Index j = 0; j < p; ++j) {
    if (cfg.standardize) {
      res.col_mean[j] = x.col(j).mean();
      const double sd = std::sqrt(
          (x.col(j).array() - res.col_mean[j]).square().sum() /
          static_cast<double>(n - 1));
      if (!(sd > 0.0)) {
        const std::string name = col_names.empty()
                                     ? "column " + std::to_string(j)
                                     : col_names[static_cast<size_t>(j)];
        throw data_error("fit: covariate has zero variance: " + name);
      }
      res.col_sd[j] = sd;
    }
    xs.col(j + 1) = (x.col(j).array() - res.col_mean[j]) / res.col_sd[j];
  }

  // initial coefficients: the iid SCAD fit on the raw response
  CvOptions cv0;
  cv0.n_lambda = cfg.n_lambda;
  cv0.lambda_min_ratio = cfg.lambda_min_ratio;
  cv0.k_folds = cfg.cv_folds;
  cv0.seed = derive_seed(cfg.seed, "cv", 0);
  cv0.cd = cfg.cd;
  cv0.cd.center = true;
  cv0.cd.intercept_col = 0;
  const SolutionPath init_path = select_lambda_cv(xs, z, cv0);
  VecX beta_aug = init_path.beta_hat;  // length p+1, intercept first
  double lambda_hat = init_path.lambda_hat;

  CovParams theta = cfg.theta0 ? *cfg.theta0 : initialize_theta(z, xs, coords);
  theta.validate();

  NelderMeadOptions nm;
  nm.max_evals = cfg.max_nm_evals;
  nm.initial_step = cfg.nm_step;
  nm.exact_evals = cfg.nm_exact_evals;

  OrderingPlan plan = make_estimation_plan(coords, theta, cfg.m, cfg.split_distance);
  FactorTemplate tmpl(plan, coords);

  double prev_objective = kInf;
  res.converged = false;
  int iter = 0;
  while (iter < cfg.max_outer) {
    ++iter;
    // theta step on the current residual, plan fixed during the search
    VecX resid = z - xs * beta_aug;
    int nm_evals = 0;
    if (!cfg.fix_theta) {
      theta = optimize_theta(tmpl, permute(resid, tmpl.order()), theta, nm, &nm_evals);
      // conditioning depends on the scaled metric, so refresh it
      plan = make_estimation_plan(coords, theta, cfg.m, cfg.split_distance);
      tmpl = FactorTemplate(plan, coords);
    }

    const VecchiaFactor factor = tmpl.build(theta);
    const PseudoData pd = make_pseudo_data(factor, permute(z, tmpl.order()),
                                           permute_rows(xs, tmpl.order()));

    CvOptions cv = cv0;
    cv.seed = derive_seed(cfg.seed, "cv", static_cast<std::uint64_t>(iter));
    cv.cd.center = false;  // the transform has no constant column to absorb means
    cv.cd.intercept_col = 0;
    const SolutionPath path = select_lambda_cv(pd.x_tilde, pd.z_tilde, cv, &beta_aug);
    beta_aug = path.beta_hat;
    lambda_hat = path.lambda_hat;

    resid = z - xs * beta_aug;
    const double neg2ll = neg2loglik_direct(factor, permute(resid, tmpl.order()));
    // penalty in the same units as the squared-residual term of the objective
    ScadParams sp{cv.scad_a, lambda_hat};
    VecX beta_pen_std = path.beta_hat_std;
    beta_pen_std[0] = 0.0;  // intercept unpenalized
    const double penalty =
        2.0 * static_cast<double>(path.n_rows) * scad_penalty(beta_pen_std, sp);
    const double objective = neg2ll + penalty;
    if (!std::isfinite(objective))
      throw numeric_error("fit: non-finite objective at iteration " +
                          std::to_string(iter));

    OuterIteration it;
    it.objective = objective;
    it.neg2loglik = neg2ll;
    it.penalty = penalty;
    it.lambda = lambda_hat;
    it.theta = theta;
    it.nm_evals = nm_evals;
    it.cd_cycles = path.total_cycles;
    res.trace.push_back(it);
    res.nm_evals_total += nm_evals;
    res.cd_cycles_total += path.total_cycles;

    if (objective > prev_objective * (1.0 - cfg.tol)) {
      res.converged = true;
      break;
    }
    prev_objective = objective;
  }
  res.outer_iterations = iter;

  res.theta = theta;
  res.lambda = lambda_hat;
  res.intercept = beta_aug[0];
  res.beta = beta_aug.tail(p);
  res.beta_raw = VecX(p);
  double b0_raw = res.intercept;
  for (Eigen::Index j = 0; j < p; ++j) {
    res.beta_raw[j] = res.beta[j] / res.col_sd[j];
    b0_raw -= res.beta[j] * res.col_mean[j] / res.col_sd[j];
  }
  res.intercept_raw = b0_raw;

  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return res;
}

}  // namespace lurk
