/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#ifndef LURK_SCORES_HPP
#define LURK_SCORES_HPP

#include <vector>

#include "lurk/types.hpp"

namespace lurk {

struct PredictionScores {
  double mse = 0.0;
  double crps = 0.0;
  double log_score = 0.0;          //!< mean negative log predictive density
  double neg_mean_density = 0.0;   //!< negative mean predictive density
};

//! standard normal pdf / cdf
double norm_pdf(double x);
double norm_cdf(double x);

//! Closed-form CRPS of a Gaussian predictive distribution at outcome y.
double crps_gaussian(double mu, double sd, double y);

//! negative log density of N(mu, var) at y
double gaussian_neg_log_density(double mu, double var, double y);

/*! Proper-score panel comparing outcomes against Gaussian predictive
 *  distributions N(mu_i, var_i). The log-score is the mean negative log
 *  density; the mean-density variant is reported alongside it. */
PredictionScores score_predictions(const VecX& y_true, const VecX& mu,
                                   const VecX& var);

struct SelectionScores {
  double tnr = 0.0;
  double tpr = 0.0;
  double kappa = 0.0;
  int nnz = 0;
};

/*! Model-selection agreement between the nonzero pattern of beta_hat and the
 *  truth mask: true negative/positive rates plus chance-corrected agreement
 *  kappa = (p_o - p_e) / (1 - p_e). Degenerate margins follow the usual
 *  conventions (vacuous rates count as 1; kappa is 0 unless agreement is
 *  perfect when p_e reaches 1). */
SelectionScores score_selection(const VecX& beta_hat,
                                const std::vector<char>& truth_mask);

}  // namespace lurk

#endif  // LURK_SCORES_HPP
