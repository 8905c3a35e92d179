/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#ifndef LURK_ESTIMATE_HPP
#define LURK_ESTIMATE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lurk/nelder_mead.hpp"
#include "lurk/objective.hpp"
#include "lurk/ordering.hpp"
#include "lurk/penalty.hpp"
#include "lurk/types.hpp"
#include "lurk/vecchia.hpp"

namespace lurk {

struct EstimationConfig {
  int m = 25;                    //!< conditioning-set size
  double tol = 1e-6;             //!< relative objective tolerance (outer loop)
  int max_outer = 10;
  int max_nm_evals = 150;        //!< objective evaluations per theta search
  int cv_folds = 10;
  int n_lambda = 100;
  double lambda_min_ratio = 1e-3;
  CdOptions cd;                  //!< coordinate-descent caps
  std::optional<CovParams> theta0;
  std::uint64_t seed = 1;
  bool standardize = true;       //!< center/scale covariate columns internally
  bool fix_theta = false;        //!< keep theta at its initial value
  SplitDistance split_distance = SplitDistance::scaled_spacetime;
  double nm_step = 0.5;          //!< initial simplex step on the log scale
  bool nm_exact_evals = false;   //!< timing harness: always use the full budget
};

struct OuterIteration {
  double objective = 0.0;  //!< neg2loglik + penalty (commensurate units)
  double neg2loglik = 0.0;
  double penalty = 0.0;
  double lambda = 0.0;
  CovParams theta;
  int nm_evals = 0;
  long long cd_cycles = 0;
};

struct FitResult {
  VecX beta;                     //!< standardized-covariate scale, no intercept
  double intercept = 0.0;        //!< on the standardized scale
  VecX beta_raw;                 //!< original covariate scale
  double intercept_raw = 0.0;
  CovParams theta;
  double lambda = 0.0;
  std::vector<OuterIteration> trace;
  bool converged = false;
  int outer_iterations = 0;
  long long nm_evals_total = 0;
  long long cd_cycles_total = 0;
  double wall_seconds = 0.0;
  VecX col_mean, col_sd;         //!< standardization applied to covariates
  std::vector<std::string> col_names;
  int m = 0;
  std::uint64_t seed = 0;

  int nnz() const;
  //! intercept + X beta on the original covariate scale
  VecX linear_predictor(const MatX& x_raw) const;
};

/*! Moment-based starting covariance parameters: half the least-squares
 *  residual variance to each of sigma^2 and tau^2, ranges at 20% of the
 *  spatial bounding-box diagonal and of the time span. */
CovParams initialize_theta(const VecX& z, const MatX& x, const CoordSet& coords);

/*! Minimize the direct objective over log(theta) with Nelder-Mead, the
 *  residual held fixed. The plan (and hence the factor template) stays
 *  fixed for the whole search. */
CovParams optimize_theta(const FactorTemplate& tmpl, const VecX& residual_plan,
                         const CovParams& theta0, const NelderMeadOptions& opts,
                         int* evals_out = nullptr);

/*! Full estimation loop: alternate the covariance-parameter search (direct
 *  objective) with the SCAD fit on pseudo-data, refreshing the ordering and
 *  conditioning sets after each theta update, until the objective stops
 *  improving by the relative tolerance. */
FitResult fit(const VecX& z, const CoordSet& coords, const MatX& x,
              const EstimationConfig& cfg,
              const std::vector<std::string>& col_names = {});

}  // namespace lurk

#endif  // LURK_ESTIMATE_HPP
