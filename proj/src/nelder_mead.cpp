/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#include "lurk/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace lurk {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAlpha = 1.0;  // reflection
constexpr double kGamma = 2.0;  // expansion
constexpr double kRho = 0.5;    // contraction
constexpr double kSigma = 0.5;  // shrink
}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const VecX&)>& fn,
                             const VecX& x0, const NelderMeadOptions& opts) {
  const int d = static_cast<int>(x0.size());
  NelderMeadResult best;
  best.x = x0;
  best.f = kInf;
  int evals = 0;
  int last_improve_eval = 0;
  double improve_ref = kInf;

  auto eval = [&](const VecX& x) {
    double f = kInf;
    if (evals < opts.max_evals) {
      f = fn(x);
      ++evals;
      if (!std::isfinite(f)) f = kInf;
      if (f < best.f) {
        if (improve_ref - f > opts.stall_improvement) {
          last_improve_eval = evals;
          improve_ref = f;
        }
        best.f = f;
        best.x = x;
      }
    }
    return f;
  };

  eval(x0);

  bool restarted = false;
  double step = opts.initial_step;
  while (evals < opts.max_evals) {
    // simplex around the best point seen so far
    std::vector<VecX> xs(static_cast<size_t>(d) + 1, best.x);
    std::vector<double> fs(static_cast<size_t>(d) + 1);
    fs[0] = best.f;
    for (int i = 0; i < d; ++i) {
      xs[static_cast<size_t>(i) + 1][i] += step;
      fs[static_cast<size_t>(i) + 1] = eval(xs[static_cast<size_t>(i) + 1]);
    }
    std::vector<int> ord(static_cast<size_t>(d) + 1);
    for (int i = 0; i <= d; ++i) ord[static_cast<size_t>(i)] = i;

    bool stop = false;
    while (evals < opts.max_evals && !stop) {
      std::sort(ord.begin(), ord.end(), [&](int a, int b) {
        return fs[static_cast<size_t>(a)] < fs[static_cast<size_t>(b)];
      });
      const int ib = ord[0];
      const int iw = ord[static_cast<size_t>(d)];
      const int is = ord[static_cast<size_t>(d) - 1];
      if (!opts.exact_evals && std::isfinite(fs[static_cast<size_t>(ib)]) &&
          std::isfinite(fs[static_cast<size_t>(iw)]) &&
          fs[static_cast<size_t>(iw)] - fs[static_cast<size_t>(ib)] <=
              opts.f_tol * (std::abs(fs[static_cast<size_t>(ib)]) + 1.0)) {
        stop = true;
        break;
      }
      if (!opts.exact_evals && evals - last_improve_eval >= opts.stall_window) {
        stop = true;  // stalled; restart or finish below
        break;
      }
      VecX centroid = VecX::Zero(d);
      for (int i = 0; i <= d; ++i)
        if (i != iw) centroid += xs[static_cast<size_t>(i)];
      centroid /= static_cast<double>(d);

      const VecX xr = centroid + kAlpha * (centroid - xs[static_cast<size_t>(iw)]);
      const double fr = eval(xr);
      if (fr < fs[static_cast<size_t>(ib)]) {
        const VecX xe = centroid + kGamma * (xr - centroid);
        const double fe = eval(xe);
        if (fe < fr) {
          xs[static_cast<size_t>(iw)] = xe;
          fs[static_cast<size_t>(iw)] = fe;
        } else {
          xs[static_cast<size_t>(iw)] = xr;
          fs[static_cast<size_t>(iw)] = fr;
        }
      } else if (fr < fs[static_cast<size_t>(is)]) {
        xs[static_cast<size_t>(iw)] = xr;
        fs[static_cast<size_t>(iw)] = fr;
      } else {
        const bool outside = fr < fs[static_cast<size_t>(iw)];
        const VecX xc = outside ? centroid + kRho * (xr - centroid)
                                : centroid + kRho * (xs[static_cast<size_t>(iw)] - centroid);
        const double fc = eval(xc);
        if (fc < std::min(fr, fs[static_cast<size_t>(iw)])) {
          xs[static_cast<size_t>(iw)] = xc;
          fs[static_cast<size_t>(iw)] = fc;
        } else {
          for (int i = 1; i <= d; ++i) {
            const int ii = ord[static_cast<size_t>(i)];
            xs[static_cast<size_t>(ii)] =
                xs[static_cast<size_t>(ib)] +
                kSigma * (xs[static_cast<size_t>(ii)] - xs[static_cast<size_t>(ib)]);
            fs[static_cast<size_t>(ii)] = eval(xs[static_cast<size_t>(ii)]);
          }
        }
      }
    }

    if (opts.exact_evals) continue;     // refill simplexes until evals run out
    if (!stop) break;                   // ran out of evaluations mid-simplex
    if (restarted) break;
    restarted = true;
    step = opts.initial_step * 0.5;
    last_improve_eval = evals;
    improve_ref = best.f;
  }

  best.evals = evals;
  return best;
}

}  // namespace lurk
