/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#include "lurk/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lurk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Candidate {
  double d;
  int rank;  // tie-break key, smaller wins
  int id;
};

//! true if a is a worse neighbor than b
inline bool worse(const Candidate& a, const Candidate& b) {
  return a.d > b.d || (a.d == b.d && a.rank > b.rank);
}

/*! Bounded worst-on-top heap of neighbor candidates. */
class BestK {
 public:
  explicit BestK(int k) : k_(k) { heap_.reserve(static_cast<size_t>(k)); }

  void offer(const Candidate& c) {
    if (static_cast<int>(heap_.size()) < k_) {
      heap_.push_back(c);
      std::push_heap(heap_.begin(), heap_.end(), cmp);
    } else if (worse(heap_.front(), c)) {
      std::pop_heap(heap_.begin(), heap_.end(), cmp);
      heap_.back() = c;
      std::push_heap(heap_.begin(), heap_.end(), cmp);
    }
  }

  bool full() const { return static_cast<int>(heap_.size()) == k_; }
  double worst_dist() const { return heap_.front().d; }
  const std::vector<Candidate>& items() const { return heap_; }

 private:
  static bool cmp(const Candidate& a, const Candidate& b) {
    return worse(b, a);  // max-heap on "worseness"
  }
  int k_;
  std::vector<Candidate> heap_;
};

/*! Uniform-grid k-nearest-neighbor index over pre-scaled coordinates (plain
 *  Euclidean metric). Points are registered incrementally, so queries see
 *  exactly the inserted set. Cells are visited in expanding Chebyshev shells
 *  with an exact cutoff, which makes results identical to a linear scan,
 *  including the (distance, rank) tie rule. */
class KnnGrid {
 public:
  KnnGrid(const std::vector<ScaledCoord>& pts, const std::vector<int>& rank)
      : pts_(pts), rank_(rank) {
    double lo[3] = {kInf, kInf, kInf};
    double hi[3] = {-kInf, -kInf, -kInf};
    for (const auto& p : pts) {
      const double v[3] = {p.x, p.y, p.t};
      for (int a = 0; a < 3; ++a) {
        lo[a] = std::min(lo[a], v[a]);
        hi[a] = std::max(hi[a], v[a]);
      }
    }
    const double target_cells =
        std::max(1.0, std::min(262144.0, pts.size() / 2.0));
    double extent[3];
    double volume = 1.0;
    int active = 0;
    for (int a = 0; a < 3; ++a) {
      extent[a] = std::max(0.0, hi[a] - lo[a]);
      if (extent[a] > 0.0) {
        volume *= extent[a];
        ++active;
      }
    }
    double h = active > 0 ? std::pow(volume / target_cells, 1.0 / active) : 1.0;
    if (!(h > 0.0) || !std::isfinite(h)) h = 1.0;
    min_h_ = kInf;
    for (int a = 0; a < 3; ++a) {
      origin_[a] = lo[a];
      if (extent[a] > 0.0) {
        nc_[a] = std::max(
            1, std::min(512, static_cast<int>(std::ceil(extent[a] / h))));
        h_[a] = extent[a] / nc_[a];
        if (nc_[a] > 1) min_h_ = std::min(min_h_, h_[a]);
      } else {
        nc_[a] = 1;
        h_[a] = 1.0;
      }
    }
    cells_.assign(static_cast<size_t>(nc_[0]) * nc_[1] * nc_[2], {});
  }

  void insert(int id) {
    cells_[cell_of(pts_[static_cast<size_t>(id)])].push_back(id);
  }

  /*! k nearest inserted points to pts_[qid], sorted by (distance, rank).
   *  qid itself is a valid result only if it was inserted. */
  std::vector<Candidate> query(int qid, int k) const {
    std::vector<Candidate> out;
    if (k <= 0) return out;
    const ScaledCoord& q = pts_[static_cast<size_t>(qid)];
    int ci[3];
    cell_index(q, ci);
    BestK best(k);
    const int max_ring = nc_[0] + nc_[1] + nc_[2];
    for (int r = 0; r < max_ring; ++r) {
      // every point in shells >= r lies at distance >= (r-1) * min_h_
      if (best.full() && min_h_ < kInf &&
          best.worst_dist() < (static_cast<double>(r) - 1.0) * min_h_)
        break;
      bool any_cell = false;
      visit_shell(ci, r, [&](const std::vector<int>& cell) {
        any_cell = true;
        for (int id : cell) {
          best.offer({dist(q, pts_[static_cast<size_t>(id)]),
                      rank_[static_cast<size_t>(id)], id});
        }
      });
      if (r > 0 && !any_cell) break;  // shell fully outside the grid
    }
    out = best.items();
    std::sort(out.begin(), out.end(),
              [](const Candidate& a, const Candidate& b) { return worse(b, a); });
    return out;
  }

 private:
  size_t cell_of(const ScaledCoord& p) const {
    int ci[3];
    cell_index(p, ci);
    return flat(ci[0], ci[1], ci[2]);
  }

  size_t flat(int x, int y, int t) const {
    return (static_cast<size_t>(t) * nc_[1] + static_cast<size_t>(y)) * nc_[0] +
           static_cast<size_t>(x);
  }

  void cell_index(const ScaledCoord& p, int* ci) const {
    const double v[3] = {p.x, p.y, p.t};
    for (int a = 0; a < 3; ++a) {
      const int c = static_cast<int>(std::floor((v[a] - origin_[a]) / h_[a]));
      ci[a] = std::clamp(c, 0, nc_[a] - 1);
    }
  }

  //! Visit cells whose Chebyshev index distance from ci equals r.
  template <typename Fn>
  void visit_shell(const int* ci, int r, Fn&& fn) const {
    const int x0 = std::max(0, ci[0] - r), x1 = std::min(nc_[0] - 1, ci[0] + r);
    const int y0 = std::max(0, ci[1] - r), y1 = std::min(nc_[1] - 1, ci[1] + r);
    const int t0 = std::max(0, ci[2] - r), t1 = std::min(nc_[2] - 1, ci[2] + r);
    for (int t = t0; t <= t1; ++t) {
      const int dt = std::abs(t - ci[2]);
      for (int y = y0; y <= y1; ++y) {
        const int dy = std::abs(y - ci[1]);
        if (dt == r || dy == r) {
          for (int x = x0; x <= x1; ++x) fn(cells_[flat(x, y, t)]);
        } else {
          // only the two x-faces of the shell remain
          if (ci[0] - r >= 0) fn(cells_[flat(ci[0] - r, y, t)]);
          if (r > 0 && ci[0] + r <= nc_[0] - 1) fn(cells_[flat(ci[0] + r, y, t)]);
        }
      }
    }
  }

  const std::vector<ScaledCoord>& pts_;
  const std::vector<int>& rank_;
  double origin_[3];
  double h_[3];
  double min_h_ = kInf;
  int nc_[3] = {1, 1, 1};
  std::vector<std::vector<int>> cells_;
};

int intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
  int count = 0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (a[i] > b[j]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

std::vector<int> sorted_intersection(const std::vector<int>& a,
                                     const std::vector<int>& b) {
  std::vector<int> out;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (a[i] > b[j]) {
      ++j;
    } else {
      out.push_back(a[i]);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

std::vector<int> maxmin_order(const CoordSet& coords, const CovParams& params) {
  coords.validate();
  params.validate();
  const int n = coords.size();
  const std::vector<ScaledCoord> sc = scale_coords(coords, params);

  ScaledCoord centroid{0.0, 0.0, 0.0};
  for (const auto& p : sc) {
    centroid.x += p.x;
    centroid.y += p.y;
    centroid.t += p.t;
  }
  centroid.x /= n;
  centroid.y /= n;
  centroid.t /= n;

  int first = 0;
  double best = kInf;
  for (int i = 0; i < n; ++i) {
    const double d = dist(sc[static_cast<size_t>(i)], centroid);
    if (d < best) {
      best = d;
      first = i;
    }
  }

  std::vector<int> order;
  order.reserve(static_cast<size_t>(n));
  order.push_back(first);
  std::vector<double> dmin(static_cast<size_t>(n));
  std::vector<char> taken(static_cast<size_t>(n), 0);
  taken[static_cast<size_t>(first)] = 1;
  for (int i = 0; i < n; ++i)
    dmin[static_cast<size_t>(i)] =
        dist(sc[static_cast<size_t>(i)], sc[static_cast<size_t>(first)]);

  for (int k = 1; k < n; ++k) {
    int pick = -1;
    double pick_d = -1.0;
    for (int i = 0; i < n; ++i) {
      if (taken[static_cast<size_t>(i)]) continue;
      if (dmin[static_cast<size_t>(i)] > pick_d) {
        pick_d = dmin[static_cast<size_t>(i)];
        pick = i;
      }
    }
    order.push_back(pick);
    taken[static_cast<size_t>(pick)] = 1;
    for (int i = 0; i < n; ++i) {
      if (taken[static_cast<size_t>(i)]) continue;
      const double d =
          dist(sc[static_cast<size_t>(i)], sc[static_cast<size_t>(pick)]);
      if (d < dmin[static_cast<size_t>(i)]) dmin[static_cast<size_t>(i)] = d;
    }
  }
  return order;
}

std::vector<std::vector<int>> nn_condition(const std::vector<int>& order,
                                           const CoordSet& coords,
                                           const CovParams& params, int m) {
  if (m < 0) throw data_error("nn_condition: m must be >= 0");
  const int n = static_cast<int>(order.size());
  const std::vector<ScaledCoord> sc_orig = scale_coords(coords, params);
  std::vector<ScaledCoord> sc(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    sc[static_cast<size_t>(i)] = sc_orig[static_cast<size_t>(order[static_cast<size_t>(i)])];

  std::vector<std::vector<int>> q(static_cast<size_t>(n));
  if (m == 0) return q;

  // positions are inserted in plan order; ties resolved by original row index
  KnnGrid grid(sc, order);
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      auto nb = grid.query(i, std::min(m, i));
      auto& qi = q[static_cast<size_t>(i)];
      qi.reserve(nb.size());
      for (const auto& c : nb) qi.push_back(c.id);
      std::sort(qi.begin(), qi.end());
    }
    grid.insert(i);
  }
  return q;
}

void sgv_split(const std::vector<std::vector<int>>& q,
               const std::vector<int>& order, const CoordSet& coords,
               const CovParams& params, std::vector<std::vector<int>>& q_y,
               std::vector<std::vector<int>>& q_z, SplitDistance dist_kind) {
  const int n = static_cast<int>(q.size());
  q_y.assign(static_cast<size_t>(n), {});
  q_z.assign(static_cast<size_t>(n), {});
  const std::vector<ScaledCoord> sc_orig = scale_coords(coords, params);

  auto anchor_dist = [&](int pos_i, int pos_l) {
    const int a = order[static_cast<size_t>(pos_i)];
    const int b = order[static_cast<size_t>(pos_l)];
    if (dist_kind == SplitDistance::spatial_only) {
      const double dx = coords[a].x - coords[b].x;
      const double dy = coords[a].y - coords[b].y;
      return std::sqrt(dx * dx + dy * dy);
    }
    return dist(sc_orig[static_cast<size_t>(a)], sc_orig[static_cast<size_t>(b)]);
  };

  for (int i = 0; i < n; ++i) {
    const auto& qi = q[static_cast<size_t>(i)];
    if (qi.empty()) continue;
    int best_overlap = -1;
    for (int j : qi)
      best_overlap =
          std::max(best_overlap, intersection_size(q_y[static_cast<size_t>(j)], qi));
    int k = -1;
    double k_d = kInf;
    int k_rank = std::numeric_limits<int>::max();
    for (int j : qi) {
      if (intersection_size(q_y[static_cast<size_t>(j)], qi) != best_overlap)
        continue;
      const double d = anchor_dist(i, j);
      const int rank = order[static_cast<size_t>(j)];
      if (d < k_d || (d == k_d && rank < k_rank)) {
        k_d = d;
        k_rank = rank;
        k = j;
      }
    }
    auto& yi = q_y[static_cast<size_t>(i)];
    yi = sorted_intersection(q_y[static_cast<size_t>(k)], qi);
    yi.insert(std::lower_bound(yi.begin(), yi.end(), k), k);
    auto& zi = q_z[static_cast<size_t>(i)];
    size_t a = 0;
    for (int j : qi) {
      while (a < yi.size() && yi[a] < j) ++a;
      if (a >= yi.size() || yi[a] != j) zi.push_back(j);
    }
  }
}

OrderingPlan make_estimation_plan(const CoordSet& coords,
                                  const CovParams& params, int m,
                                  SplitDistance dist_kind) {
  OrderingPlan plan;
  plan.m = m;
  plan.order = maxmin_order(coords, params);
  plan.q = nn_condition(plan.order, coords, params, m);
  sgv_split(plan.q, plan.order, coords, params, plan.q_y, plan.q_z, dist_kind);
  return plan;
}

PredictionPlan build_prediction_plan(const CoordSet& obs, const CoordSet& pred,
                                     const CovParams& params, int m) {
  obs.validate();
  if (!pred.empty()) pred.validate();
  params.validate();
  const int n = obs.size();
  const int n_pred = pred.size();
  const int n_all = n + n_pred;

  PredictionPlan plan;
  plan.n_obs = n;
  plan.n_all = n_all;
  plan.m = m;

  CoordSet combined = obs;
  combined.ids.clear();
  combined.pts.insert(combined.pts.end(), pred.pts.begin(), pred.pts.end());
  const std::vector<ScaledCoord> sc_orig = scale_coords(combined, params);

  // observed coordinates keep their maxmin order; prediction coordinates
  // continue the same greedy maximization against everything ordered so far
  std::vector<int> order = maxmin_order(obs, params);
  if (n_pred > 0) {
    std::vector<double> dmin(static_cast<size_t>(n_pred), kInf);
    std::vector<char> taken(static_cast<size_t>(n_pred), 0);
    for (int j = 0; j < n_pred; ++j) {
      const auto& pj = sc_orig[static_cast<size_t>(n + j)];
      for (int i = 0; i < n; ++i)
        dmin[static_cast<size_t>(j)] = std::min(
            dmin[static_cast<size_t>(j)], dist(pj, sc_orig[static_cast<size_t>(i)]));
    }
    for (int k = 0; k < n_pred; ++k) {
      int pick = -1;
      double pick_d = -1.0;
      for (int j = 0; j < n_pred; ++j) {
        if (taken[static_cast<size_t>(j)]) continue;
        if (dmin[static_cast<size_t>(j)] > pick_d) {
          pick_d = dmin[static_cast<size_t>(j)];
          pick = j;
        }
      }
      taken[static_cast<size_t>(pick)] = 1;
      order.push_back(n + pick);
      const auto& pp = sc_orig[static_cast<size_t>(n + pick)];
      for (int j = 0; j < n_pred; ++j) {
        if (taken[static_cast<size_t>(j)]) continue;
        const double d = dist(sc_orig[static_cast<size_t>(n + j)], pp);
        if (d < dmin[static_cast<size_t>(j)]) dmin[static_cast<size_t>(j)] = d;
      }
    }
  }
  plan.order = order;

  std::vector<ScaledCoord> sc(static_cast<size_t>(n_all));
  for (int i = 0; i < n_all; ++i)
    sc[static_cast<size_t>(i)] = sc_orig[static_cast<size_t>(order[static_cast<size_t>(i)])];

  plan.q_y.assign(static_cast<size_t>(n_all), {});
  plan.q_z.assign(static_cast<size_t>(n_all), {});
  if (m <= 0) return plan;

  // all observed positions are always eligible (their responses are ordered
  // first); later latent positions are eligible once ordered
  KnnGrid grid(sc, order);
  for (int i = 0; i < n; ++i) grid.insert(i);
  for (int i = 0; i < n_all; ++i) {
    // eligible set when querying position i: every observed position (their
    // responses precede all latent variables, and include i itself for
    // i < n), plus latent positions < i; prediction positions never
    // condition on themselves
    const int avail = (i < n) ? n : i;
    const int k = std::min(m, avail);
    auto nb = grid.query(i, k);
    auto& qy = plan.q_y[static_cast<size_t>(i)];
    auto& qz = plan.q_z[static_cast<size_t>(i)];
    for (const auto& c : nb) {
      if (c.id < i)
        qy.push_back(c.id);
      else
        qz.push_back(c.id);
    }
    std::sort(qy.begin(), qy.end());
    std::sort(qz.begin(), qz.end());
    if (i >= n) grid.insert(i);
  }
  return plan;
}

}  // namespace lurk
