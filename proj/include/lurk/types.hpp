/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#ifndef LURK_TYPES_HPP
#define LURK_TYPES_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace lurk {

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/*! Input/validation failures (bad files, malformed columns, infeasible
 *  requests). CLI maps these to exit code 2. */
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

/*! Numerical failures (non-SPD conditioning blocks, diverged optimizers).
 *  CLI maps these to exit code 3. */
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

/*! A single spatiotemporal coordinate: planar position in km, time in days. */
struct Coord {
  double x = 0.0;  //!< east-west position (km)
  double y = 0.0;  //!< north-south position (km)
  double t = 0.0;  //!< time (days)

  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(t);
  }
};

/*! An ordered set of spatiotemporal coordinates with optional row labels. */
struct CoordSet {
  std::vector<Coord> pts;
  std::vector<std::string> ids;  //!< optional, empty or size() == pts.size()

  int size() const { return static_cast<int>(pts.size()); }
  bool empty() const { return pts.empty(); }
  const Coord& operator[](int i) const { return pts[static_cast<size_t>(i)]; }
  Coord& operator[](int i) { return pts[static_cast<size_t>(i)]; }

  void validate() const {
    if (pts.empty()) throw data_error("coordinate set is empty");
    for (size_t i = 0; i < pts.size(); ++i)
      if (!pts[i].finite())
        throw data_error("non-finite coordinate at row " + std::to_string(i));
    if (!ids.empty() && ids.size() != pts.size())
      throw data_error("coordinate id count does not match coordinate count");
  }
};

/*! Covariance parameters theta = (sigma, gamma_s, gamma_t, tau):
 *  marginal process SD, spatial range (km), temporal range (days), noise SD. */
struct CovParams {
  double sigma = 1.0;
  double gamma_s = 1.0;
  double gamma_t = 1.0;
  double tau = 0.1;

  double sigma2() const { return sigma * sigma; }
  double tau2() const { return tau * tau; }

  bool valid() const {
    return std::isfinite(sigma) && sigma > 0.0 && std::isfinite(gamma_s) &&
           gamma_s > 0.0 && std::isfinite(gamma_t) && gamma_t > 0.0 &&
           std::isfinite(tau) && tau >= 0.0;
  }
  void validate() const {
    if (!valid())
      throw data_error(
          "invalid covariance parameters: require sigma>0, gamma_s>0, "
          "gamma_t>0, tau>=0");
  }
};

}  // namespace lurk

#endif  // LURK_TYPES_HPP
