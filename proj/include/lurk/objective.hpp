/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#ifndef LURK_OBJECTIVE_HPP
#define LURK_OBJECTIVE_HPP

#include "lurk/penalty.hpp"
#include "lurk/types.hpp"
#include "lurk/vecchia.hpp"

namespace lurk {

/*! Transformed response and design under which the correlated-error
 *  penalized regression becomes an iid-error least-squares problem. Rows
 *  index the joint variable sequence (length 2n for estimation factors). */
struct PseudoData {
  VecX z_tilde;
  MatX x_tilde;
};

struct ObjectiveValue {
  double penalized = 0.0;   //!< neg2loglik + penalty
  double neg2loglik = 0.0;
  double penalty = 0.0;
};

/*! Direct residual form of twice the negative approximate loglikelihood
 *  (up to the constant n log 2pi):
 *    |B' e|^2 - |V^{-1} A B' e|^2 - 2 sum log U_ii + 2 sum log V_ii,
 *  where e is the residual z - X beta in plan order. O(n (m+1)) given the
 *  factor, no pseudo-data required. */
double neg2loglik_direct(const VecchiaFactor& factor, const VecX& residual);

/*! Pseudo-data transform:
 *    z~ = B' z - A' W^{-1} A B' z,   X~ likewise column-wise.
 *  Each column costs two triangular solves with the factor of W. Ordinary
 *  penalized least squares on (z~, X~) then matches the correlated-error
 *  objective up to its log-determinant terms. */
PseudoData make_pseudo_data(const VecchiaFactor& factor, const VecX& z,
                            const MatX& x);

//! neg2loglik plus the SCAD penalty of beta (additive over coordinates).
ObjectiveValue penalized_objective(double neg2ll, const VecX& beta,
                                   const ScadParams& p);

}  // namespace lurk

#endif  // LURK_OBJECTIVE_HPP
