/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#ifndef LURK_BASELINES_HPP
#define LURK_BASELINES_HPP

#include <optional>
#include <string>

#include "lurk/estimate.hpp"
#include "lurk/predict.hpp"
#include "lurk/types.hpp"

namespace lurk {

enum class Method {
  lurk_vecchia,
  lurk_full,
  lurk_local,
  lur_iid,
  local_kriging,
};

std::string method_name(Method m);
std::optional<Method> parse_method(const std::string& name);

struct LocalOptions {
  int m = 25;                  //!< kriging neighborhood / conditioning size
  int k = 10;                  //!< number of parameter-estimation subsamples
  std::uint64_t seed = 1;
  bool log_scale_mean = false; //!< average subsample estimates on the log scale
  int nm_evals = 200;
  int cv_folds = 10;
  int n_lambda = 100;
  double lambda_min_ratio = 1e-3;
  CdOptions cd;
};

/*! One fitted comparison method behind a method-agnostic prediction
 *  interface. Fields are populated per method; the training slices needed by
 *  the kriging-style predictors are retained. */
struct BaselineFit {
  Method method = Method::lur_iid;

  // regression part (absent for local kriging)
  VecX beta;            //!< standardized-covariate scale
  VecX beta_raw;
  double intercept_raw = 0.0;
  double lambda = 0.0;
  double resid_mse = 0.0;

  CovParams theta;      //!< zeros for the iid model
  int m = 25;
  double z_mean = 0.0;  //!< covariate-free constant mean

  std::optional<FitResult> vecchia;  //!< the full estimation result when applicable

  // retained training data
  VecX z_train;
  MatX x_train;
  CoordSet train_coords;
  VecX train_resid;

  PredictionResult predict_at(const CoordSet& pred_coords, const MatX& x_pred) const;
  //! coefficient vector used for model-selection scoring; empty when the
  //! method performs no selection
  VecX selection_beta() const;
};

//! SCAD-penalized iid regression; predictions are the fitted trend with the
//! residual mean square as variance.
BaselineFit fit_lur_iid(const VecX& z, const MatX& x, const LocalOptions& opt);

//! Two-stage trend + residual kriging: the iid fit above, covariance
//! parameters averaged over dense likelihood fits on small residual
//! subsamples, local simple kriging of residuals at prediction time.
BaselineFit fit_lurk_local(const VecX& z, const CoordSet& coords, const MatX& x,
                           const LocalOptions& opt);

//! Constant-mean variant of lurk-local that never sees covariates.
BaselineFit fit_local_kriging(const VecX& z, const CoordSet& coords,
                              const LocalOptions& opt);

//! The exact dense method: the full estimation loop with m = n - 1.
//! Guarded to n <= 2000.
BaselineFit fit_lurk_full(const VecX& z, const CoordSet& coords, const MatX& x,
                          EstimationConfig cfg);

//! The proposed method wrapped in the same interface.
BaselineFit fit_lurk_vecchia(const VecX& z, const CoordSet& coords,
                             const MatX& x, const EstimationConfig& cfg);

/*! Zero-mean dense maximum likelihood for the covariance parameters on a
 *  subset of rows; used by the subsample-averaging baselines. */
CovParams dense_ml_zero_mean(const VecX& values, const CoordSet& coords,
                             const std::vector<int>& rows,
                             const CovParams& theta0, int max_evals);

}  // namespace lurk

#endif  // LURK_BASELINES_HPP
