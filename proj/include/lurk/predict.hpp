/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#ifndef LURK_PREDICT_HPP
#define LURK_PREDICT_HPP

#include <utility>
#include <vector>

#include "lurk/estimate.hpp"
#include "lurk/types.hpp"

namespace lurk {

struct PredictionResult {
  VecX mu;         //!< kriging mean of the noise-free process
  VecX var;        //!< kriging variance of the noise-free process
  VecX var_noisy;  //!< var + tau^2, for response prediction

  int size() const { return static_cast<int>(mu.size()); }
};

/*! Joint response-first prediction: builds the prediction plan and factor at
 *  the fitted parameters, forms the posterior mean
 *    mu_all = X_all b - W_all^{-1} A_all B_all' (z - X b)
 *  and reads posterior variances off the diagonal of W_all^{-1} via the
 *  Takahashi recursions, then subsets to the prediction coordinates.
 *  Uncertainty in the estimated coefficients is ignored. */
PredictionResult predict(const FitResult& fit, const VecX& z,
                         const CoordSet& coords, const MatX& x,
                         const CoordSet& pred_coords, const MatX& x_pred,
                         int m);

/*! Posterior covariances of the joint latent vector at requested index
 *  pairs. Pairs use combined indexing: 0..n-1 are the observed coordinates,
 *  n.. the prediction coordinates. Only pairs inside the factor sparsity
 *  pattern are available; anything else raises an error rather than being
 *  approximated. */
std::vector<double> joint_posterior_summaries(
    const FitResult& fit, const VecX& z, const CoordSet& coords, const MatX& x,
    const CoordSet& pred_coords, const MatX& x_pred, int m,
    const std::vector<std::pair<int, int>>& pairs);

}  // namespace lurk

#endif  // LURK_PREDICT_HPP
