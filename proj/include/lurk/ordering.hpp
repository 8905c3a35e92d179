/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#ifndef LURK_ORDERING_HPP
#define LURK_ORDERING_HPP

#include <vector>

#include "lurk/geometry.hpp"
#include "lurk/types.hpp"

namespace lurk {

/*! Distance used when picking the anchor index k_i inside the latent/observed
 *  split. The scaled spatiotemporal metric is the default; the spatial-only
 *  variant measures plain Euclidean km between spatial positions. */
enum class SplitDistance { scaled_spacetime, spatial_only };

/*! Ordering plus conditioning sets for the interleaved estimation
 *  factorization. All index vectors hold 0-based positions in `order`,
 *  sorted ascending; members of q(i) precede i. q_y/q_z partition q. */
struct OrderingPlan {
  std::vector<int> order;               //!< position -> original row
  std::vector<std::vector<int>> q;      //!< nearest previously ordered
  std::vector<std::vector<int>> q_y;    //!< conditioned via latent values
  std::vector<std::vector<int>> q_z;    //!< conditioned via observed values
  int m = 0;

  int size() const { return static_cast<int>(order.size()); }
};

/*! Response-first plan for joint prediction. Latent variables cover the
 *  observed coordinates (positions 0..n_obs-1) followed by the prediction
 *  coordinates; all observed-response variables are unconditioned and ordered
 *  before every latent variable. q_y(i) holds positions j < i (conditioning
 *  on the latent value), q_z(i) positions j >= i (conditioning on the
 *  response, hence j < n_obs). For i < n_obs, i itself belongs to q_z(i). */
struct PredictionPlan {
  int n_obs = 0;
  int n_all = 0;                        //!< n_obs + n_pred
  std::vector<int> order;               //!< position -> combined row (obs rows first)
  std::vector<std::vector<int>> q_y;
  std::vector<std::vector<int>> q_z;
  int m = 0;
};

/*! Greedy maximum-minimum-distance ordering under the scaled metric.
 *  Starts at the coordinate closest to the scaled centroid; each subsequent
 *  pick maximizes the minimum distance to the already-ordered set. Ties are
 *  broken by lower original index. Returns original row indices. */
std::vector<int> maxmin_order(const CoordSet& coords, const CovParams& params);

/*! For each position i in the ordering, the min(m, i) previously ordered
 *  positions nearest to i under the scaled metric (ascending positions).
 *  Distance ties are broken by lower original index. */
std::vector<std::vector<int>> nn_condition(const std::vector<int>& order,
                                           const CoordSet& coords,
                                           const CovParams& params, int m);

/*! Split each q(i) into latent/observed parts. The anchor k_i is the
 *  closest member of the set of predecessors whose latent conditioning
 *  overlaps q(i) the most; q_y(i) = {k_i} union (q_y(k_i) intersect q(i)).
 *  The result satisfies the closure property: j < k both in q_y(i) implies
 *  j in q_y(k), which keeps the posterior-precision factor fill-free. */
void sgv_split(const std::vector<std::vector<int>>& q,
               const std::vector<int>& order, const CoordSet& coords,
               const CovParams& params,
               std::vector<std::vector<int>>& q_y,
               std::vector<std::vector<int>>& q_z,
               SplitDistance dist_kind = SplitDistance::scaled_spacetime);

//! maxmin_order + nn_condition + sgv_split in one call.
OrderingPlan make_estimation_plan(
    const CoordSet& coords, const CovParams& params, int m,
    SplitDistance dist_kind = SplitDistance::scaled_spacetime);

/*! Response-first plan over observed + prediction coordinates: observed
 *  coordinates keep their maxmin order, prediction coordinates continue the
 *  same greedy rule, and each latent variable conditions on the m nearest
 *  eligible coordinates (preferring latent over response values). */
PredictionPlan build_prediction_plan(const CoordSet& obs, const CoordSet& pred,
                                     const CovParams& params, int m);

}  // namespace lurk

#endif  // LURK_ORDERING_HPP
