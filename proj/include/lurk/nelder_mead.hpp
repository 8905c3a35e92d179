/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#ifndef LURK_NELDER_MEAD_HPP
#define LURK_NELDER_MEAD_HPP

#include <functional>

#include "lurk/types.hpp"

namespace lurk {

struct NelderMeadOptions {
  int max_evals = 200;
  double initial_step = 0.5;
  double f_tol = 1e-9;           //!< relative simplex spread for termination
  double stall_improvement = 1e-4;
  int stall_window = 20;         //!< restart once on stall, then stop
  bool exact_evals = false;      //!< run exactly max_evals (timing harnesses)
};

struct NelderMeadResult {
  VecX x;
  double f = 0.0;
  int evals = 0;
};

/*! Derivative-free simplex minimization. Non-finite objective values are
 *  treated as +inf. The best point ever seen (including the start) is
 *  returned, so the result never exceeds f(x0). One restart from the best
 *  point with a shrunk simplex fires when improvement stalls. */
NelderMeadResult nelder_mead(const std::function<double(const VecX&)>& fn,
                             const VecX& x0, const NelderMeadOptions& opts);

}  // namespace lurk

#endif  // LURK_NELDER_MEAD_HPP
