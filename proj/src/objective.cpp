/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#include "lurk/objective.hpp"

#include "lurk/parallel.hpp"

namespace lurk {

double neg2loglik_direct(const VecchiaFactor& factor, const VecX& residual) {
  const VecX bz = factor.bt_mul(residual);
  VecX w = factor.a_mul(bz);
  factor.chol.solve_v(w);
  return bz.squaredNorm() - w.squaredNorm() - 2.0 * factor.sum_log_u_diag() +
         2.0 * factor.sum_log_v_diag();
}

PseudoData make_pseudo_data(const VecchiaFactor& factor, const VecX& z,
                            const MatX& x) {
  if (z.size() != factor.spec->n_obs || x.rows() != factor.spec->n_obs)
    throw data_error("make_pseudo_data: dimension mismatch");
  auto transform = [&factor](const VecX& v) {
    const VecX bv = factor.bt_mul(v);
    const VecX t = factor.w_inv_mul(factor.a_mul(bv));
    return VecX(bv - factor.at_mul(t));
  };
  PseudoData out;
  out.z_tilde = transform(z);
  out.x_tilde.resize(factor.spec->dim, x.cols());
  parallel_for(0, static_cast<int>(x.cols()), [&](int j) {
    out.x_tilde.col(j) = transform(x.col(j));
  });
  return out;
}

ObjectiveValue penalized_objective(double neg2ll, const VecX& beta,
                                   const ScadParams& p) {
  p.validate();
  ObjectiveValue v;
  v.neg2loglik = neg2ll;
  v.penalty = scad_penalty(beta, p);
  v.penalized = v.neg2loglik + v.penalty;
  return v;
}

}  // namespace lurk
