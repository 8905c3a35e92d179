/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#include "lurk/predict.hpp"

#include <string>

namespace lurk {

PredictionResult predict(const FitResult& fit, const VecX& z,
                         const CoordSet& coords, const MatX& x,
                         const CoordSet& pred_coords, const MatX& x_pred,
                         int m) {
  PredictionResult out;
  const int n_pred = pred_coords.size();
  if (n_pred == 0) {
    out.mu = out.var = out.var_noisy = VecX();
    return out;
  }
  const int n = coords.size();

  const PredictionPlan plan = build_prediction_plan(coords, pred_coords, fit.theta, m);
  FactorTemplate tmpl(plan, coords, pred_coords);
  const VecchiaFactor factor = tmpl.build(fit.theta);

  if (z.size() != n || x.rows() != n)
    throw data_error("predict: training rows do not match coordinates");
  if (x_pred.cols() != x.cols())
    throw data_error("predict: prediction covariates do not match the fit");
  if (x_pred.rows() != n_pred)
    throw data_error("predict: prediction rows do not match coordinates");

  const VecX lp_obs = fit.linear_predictor(x);
  const VecX lp_pred = fit.linear_predictor(x_pred);
  const VecX eps = z - lp_obs;
  VecX eps_plan(n);
  for (int i = 0; i < n; ++i) eps_plan[i] = eps[plan.order[static_cast<size_t>(i)]];

  VecX w = factor.a_mul(factor.bt_mul(eps_plan));
  factor.chol.solve_w_inv(w);

  const SelectedInverse inv(factor.chol);
  const double tau2 = fit.theta.tau2();

  out.mu = VecX(n_pred);
  out.var = VecX(n_pred);
  out.var_noisy = VecX(n_pred);
  for (int i = 0; i < plan.n_all; ++i) {
    const int c = plan.order[static_cast<size_t>(i)];
    if (c < n) continue;
    const double v = inv.diag(i);
    if (!(v > 0.0))
      throw numeric_error("predict: non-positive posterior variance at prediction row " +
                          std::to_string(c - n));
    out.mu[c - n] = lp_pred[c - n] - w[i];
    out.var[c - n] = v;
    out.var_noisy[c - n] = v + tau2;
  }
  return out;
}

std::vector<double> joint_posterior_summaries(
    const FitResult& fit, const VecX& z, const CoordSet& coords, const MatX& x,
    const CoordSet& pred_coords, const MatX& x_pred, int m,
    const std::vector<std::pair<int, int>>& pairs) {
  std::vector<double> out;
  if (pairs.empty()) return out;
  (void)z;
  (void)x;
  (void)x_pred;

  const PredictionPlan plan = build_prediction_plan(coords, pred_coords, fit.theta, m);
  FactorTemplate tmpl(plan, coords, pred_coords);
  const VecchiaFactor factor = tmpl.build(fit.theta);

  std::vector<int> pos_of(static_cast<size_t>(plan.n_all), -1);
  for (int i = 0; i < plan.n_all; ++i)
    pos_of[static_cast<size_t>(plan.order[static_cast<size_t>(i)])] = i;

  const SelectedInverse inv(factor.chol);
  out.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    if (a < 0 || a >= plan.n_all || b < 0 || b >= plan.n_all)
      throw data_error("joint_posterior_summaries: pair index out of range");
    const auto v = inv.entry(pos_of[static_cast<size_t>(a)], pos_of[static_cast<size_t>(b)]);
    if (!v)
      throw numeric_error(
          "joint_posterior_summaries: pair (" + std::to_string(a) + ", " +
          std::to_string(b) +
          ") is not selected-invertible (outside the factor sparsity pattern)");
    out.push_back(*v);
  }
  return out;
}

}  // namespace lurk
