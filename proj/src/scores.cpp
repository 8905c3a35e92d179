/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#include "lurk/scores.hpp"

#include <cmath>

namespace lurk {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;
constexpr double kInvSqrtPi = 0.56418958354775628694807945156077;
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}  // namespace

double norm_pdf(double x) {
  return std::exp(-0.5 * x * x) * kInvSqrt2 * kInvSqrtPi;
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double crps_gaussian(double mu, double sd, double y) {
  const double w = (y - mu) / sd;
  return sd * (w * (2.0 * norm_cdf(w) - 1.0) + 2.0 * norm_pdf(w) - kInvSqrtPi);
}

double gaussian_neg_log_density(double mu, double var, double y) {
  const double d = y - mu;
  return 0.5 * (kLog2Pi + std::log(var) + d * d / var);
}

PredictionScores score_predictions(const VecX& y_true, const VecX& mu,
                                   const VecX& var) {
  const Eigen::Index n = y_true.size();
  if (mu.size() != n || var.size() != n)
    throw data_error("score_predictions: length mismatch");
  PredictionScores s;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(var[i] > 0.0))
      throw data_error("score_predictions: non-positive variance at row " +
                       std::to_string(i));
    const double d = y_true[i] - mu[i];
    s.mse += d * d;
    s.crps += crps_gaussian(mu[i], std::sqrt(var[i]), y_true[i]);
    const double nld = gaussian_neg_log_density(mu[i], var[i], y_true[i]);
    s.log_score += nld;
    s.neg_mean_density -= std::exp(-nld);
  }
  const double dn = static_cast<double>(n);
  s.mse /= dn;
  s.crps /= dn;
  s.log_score /= dn;
  s.neg_mean_density /= dn;
  return s;
}

SelectionScores score_selection(const VecX& beta_hat,
                                const std::vector<char>& truth_mask) {
  const Eigen::Index p = beta_hat.size();
  if (static_cast<Eigen::Index>(truth_mask.size()) != p)
    throw data_error("score_selection: length mismatch");
  double tp = 0, tn = 0, fp = 0, fn = 0;
  for (Eigen::Index j = 0; j < p; ++j) {
    const bool sel = beta_hat[j] != 0.0;
    const bool truth = truth_mask[static_cast<size_t>(j)] != 0;
    if (sel && truth) ++tp;
    if (sel && !truth) ++fp;
    if (!sel && truth) ++fn;
    if (!sel && !truth) ++tn;
  }
  SelectionScores s;
  s.nnz = static_cast<int>(tp + fp);
  s.tnr = (tn + fp) > 0 ? tn / (tn + fp) : 1.0;
  s.tpr = (tp + fn) > 0 ? tp / (tp + fn) : 1.0;
  const double dp = static_cast<double>(p);
  const double po = (tp + tn) / dp;
  const double pe =
      ((tp + fp) * (tp + fn) + (fn + tn) * (fp + tn)) / (dp * dp);
  if (1.0 - pe < 1e-15) {
    s.kappa = po >= 1.0 - 1e-15 ? 1.0 : 0.0;
  } else {
    s.kappa = (po - pe) / (1.0 - pe);
  }
  return s;
}

}  // namespace lurk
