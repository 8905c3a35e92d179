/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#ifndef LURK_GEOMETRY_HPP
#define LURK_GEOMETRY_HPP

#include <vector>

#include "lurk/types.hpp"

namespace lurk {

/*! Spatiotemporal distance with spatial/temporal axes scaled by the range
 *  parameters: sqrt(|s_a - s_b|^2 / gamma_s^2 + (t_a - t_b)^2 / gamma_t^2). */
inline double scaled_distance(const Coord& a, const Coord& b,
                              const CovParams& p) {
  const double dx = (a.x - b.x) / p.gamma_s;
  const double dy = (a.y - b.y) / p.gamma_s;
  const double dt = (a.t - b.t) / p.gamma_t;
  return std::sqrt(dx * dx + dy * dy + dt * dt);
}

/*! Non-separable spatiotemporal exponential covariance of the latent process:
 *  sigma^2 * exp(-scaled_distance(a, b)). */
inline double cov_latent(const Coord& a, const Coord& b, const CovParams& p) {
  return p.sigma2() * std::exp(-scaled_distance(a, b, p));
}

/*! Covariance between observed (noisy) values at rows a_idx, b_idx:
 *  the latent covariance plus the nugget tau^2 on the diagonal. */
double cov_observed(int a_idx, int b_idx, const CoordSet& coords,
                    const CovParams& p);

/*! Coordinate pre-scaled by (gamma_s, gamma_s, gamma_t) so that the kernel
 *  distance is a plain Euclidean norm. Used by the ordering/conditioning and
 *  factor-construction hot paths. */
struct ScaledCoord {
  double x, y, t;
};

inline double dist(const ScaledCoord& a, const ScaledCoord& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dt = a.t - b.t;
  return std::sqrt(dx * dx + dy * dy + dt * dt);
}

std::vector<ScaledCoord> scale_coords(const CoordSet& coords,
                                      const CovParams& p);

//! Dense n x n latent covariance matrix. Oracle/baseline use only.
MatX dense_latent_cov(const CoordSet& coords, const CovParams& p);

//! Dense n x n observed covariance: latent + tau^2 I. Oracle/baseline use only.
MatX dense_observed_cov(const CoordSet& coords, const CovParams& p);

//! Cross-covariance between two coordinate sets (latent kernel), a.size() x b.size().
MatX dense_cross_cov(const CoordSet& a, const CoordSet& b, const CovParams& p);

/*! Equirectangular lon/lat -> km projection about a reference latitude.
 *  CLI convenience only; the core operates on planar km throughout. */
Coord lonlat_to_km(double lon_deg, double lat_deg, double t_days,
                   double ref_lon_deg, double ref_lat_deg);

}  // namespace lurk

#endif  // LURK_GEOMETRY_HPP
