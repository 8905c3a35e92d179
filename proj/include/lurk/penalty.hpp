/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#ifndef LURK_PENALTY_HPP
#define LURK_PENALTY_HPP

#include <cstdint>
#include <vector>

#include "lurk/types.hpp"

namespace lurk {

/*! SCAD penalty parameters: concavity a (> 2) and shrinkage level lambda.
 *  a = 3.7 is the usual default. */
struct ScadParams {
  double a = 3.7;
  double lambda = 0.0;

  void validate() const {
    if (!(a > 2.0)) throw data_error("ScadParams: a must exceed 2");
    if (!(lambda >= 0.0)) throw data_error("ScadParams: lambda must be >= 0");
  }
};

/*! Three-branch SCAD penalty of a single coefficient: linear up to lambda,
 *  quadratic blend up to a*lambda, constant lambda^2 (a+1)/2 beyond. */
double scad_value(double beta_j, const ScadParams& p);

//! Sum of scad_value over all entries.
double scad_penalty(const VecX& beta, const ScadParams& p);

/*! Minimizer of 0.5 (z_j - beta)^2 + scad(beta) for a covariate with unit
 *  second moment: soft-thresholding near zero, a rescaled soft threshold in
 *  the blend region, and the identity beyond a*lambda. */
double scad_threshold(double z_j, const ScadParams& p);

struct CdOptions {
  double tol = 1e-5;        //!< max coefficient change (standardized scale)
  int max_cycles = 5000;
  bool center = false;      //!< center columns and response (plain iid solves)
  int intercept_col = -1;   //!< unpenalized column; required when center=true
  bool track_objective = false;
};

struct CdResult {
  VecX beta;                //!< original covariate scale
  int cycles = 0;
  bool converged = false;
  bool hit_max_cycles = false;       //!< warning, not a failure
  std::vector<double> objective_trace;  //!< per cycle, when tracked
};

/*! Cyclic coordinate descent for the SCAD-penalized least-squares problem
 *  (1/2N) |z - X b|^2 + sum_j scad(b_j) with columns internally scaled to
 *  unit second moment (and optionally centered); the scaling is unwound on
 *  output. The intercept column, when given, is updated without penalty. */
CdResult coordinate_descent(const MatX& x, const VecX& z, const ScadParams& p,
                            const VecX& beta0, const CdOptions& opts);

//! Objective the solver minimizes, for descent checks and grid oracles.
double cd_objective(const MatX& x, const VecX& z, const ScadParams& p,
                    const VecX& beta, const CdOptions& opts);

struct SolutionPath {
  VecX lambdas;        //!< descending
  MatX betas;          //!< one column per lambda, original scale
  VecX cv_mse;
  std::vector<int> nnz;  //!< selected count per lambda (penalized columns)
  int selected = -1;
  double lambda_hat = 0.0;
  VecX beta_hat;
  VecX beta_hat_std;   //!< on the internally standardized scale
  long long total_cycles = 0;
  int n_rows = 0;
};

struct CvOptions {
  int n_lambda = 100;
  double lambda_min_ratio = 1e-3;
  int k_folds = 10;
  std::uint64_t seed = 1;
  double scad_a = 3.7;
  CdOptions cd;
};

/*! Fit the SCAD path over a geometric lambda grid with warm starts and pick
 *  lambda by k-fold cross-validated mean squared error on held-out rows.
 *  Fold assignment is a seeded shuffle; results are deterministic given the
 *  seed. warm, when given, initializes the largest-lambda fit. */
SolutionPath select_lambda_cv(const MatX& x, const VecX& z,
                              const CvOptions& opts,
                              const VecX* warm = nullptr);

}  // namespace lurk

#endif  // LURK_PENALTY_HPP
