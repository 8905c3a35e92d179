/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#include "lurk/geometry.hpp"

namespace lurk {

double cov_observed(int a_idx, int b_idx, const CoordSet& coords,
                    const CovParams& p) {
  const int n = coords.size();
  if (a_idx < 0 || a_idx >= n || b_idx < 0 || b_idx >= n)
    throw data_error("cov_observed: index out of range");
  double c = cov_latent(coords[a_idx], coords[b_idx], p);
  if (a_idx == b_idx) c += p.tau2();
  return c;
}

std::vector<ScaledCoord> scale_coords(const CoordSet& coords,
                                      const CovParams& p) {
  std::vector<ScaledCoord> out(static_cast<size_t>(coords.size()));
  const double inv_s = 1.0 / p.gamma_s;
  const double inv_t = 1.0 / p.gamma_t;
  for (int i = 0; i < coords.size(); ++i) {
    out[static_cast<size_t>(i)] = {coords[i].x * inv_s, coords[i].y * inv_s,
                                   coords[i].t * inv_t};
  }
  return out;
}

MatX dense_latent_cov(const CoordSet& coords, const CovParams& p) {
  const int n = coords.size();
  MatX c(n, n);
  for (int j = 0; j < n; ++j) {
    c(j, j) = p.sigma2();
    for (int i = 0; i < j; ++i) {
      const double v = cov_latent(coords[i], coords[j], p);
      c(i, j) = v;
      c(j, i) = v;
    }
  }
  return c;
}

MatX dense_observed_cov(const CoordSet& coords, const CovParams& p) {
  MatX c = dense_latent_cov(coords, p);
  c.diagonal().array() += p.tau2();
  return c;
}

MatX dense_cross_cov(const CoordSet& a, const CoordSet& b, const CovParams& p) {
  MatX c(a.size(), b.size());
  for (int j = 0; j < b.size(); ++j)
    for (int i = 0; i < a.size(); ++i) c(i, j) = cov_latent(a[i], b[j], p);
  return c;
}

Coord lonlat_to_km(double lon_deg, double lat_deg, double t_days,
                   double ref_lon_deg, double ref_lat_deg) {
  constexpr double kDegToRad = 0.017453292519943295;
  constexpr double kEarthRadiusKm = 6371.0088;
  const double lat0 = ref_lat_deg * kDegToRad;
  Coord c;
  c.x = kEarthRadiusKm * (lon_deg - ref_lon_deg) * kDegToRad * std::cos(lat0);
  c.y = kEarthRadiusKm * (lat_deg - ref_lat_deg) * kDegToRad;
  c.t = t_days;
  return c;
}

}  // namespace lurk
