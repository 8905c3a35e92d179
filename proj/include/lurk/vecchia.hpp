/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#ifndef LURK_VECCHIA_HPP
#define LURK_VECCHIA_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "lurk/geometry.hpp"
#include "lurk/ordering.hpp"
#include "lurk/sparse.hpp"
#include "lurk/types.hpp"

namespace lurk {

/*! Sparse row-slice of U (the latent rows A or the observed rows B),
 *  compressed by row. Columns index the joint variable sequence. */
struct SparseRowMatrix {
  int nrows = 0;
  int ncols = 0;
  std::vector<std::int64_t> row_ptr;
  std::vector<int> cols;
  std::vector<double> vals;

  std::int64_t nnz() const { return row_ptr.empty() ? 0 : row_ptr[static_cast<size_t>(nrows)]; }
  VecX mul(const VecX& x) const;   //!< A x
  VecX tmul(const VecX& x) const;  //!< A' x
};

/*! Description of the joint variable sequence u behind a factor: which
 *  entries are responses, which coordinate each entry sits at (plan
 *  position), and the conditioning set of each entry in u indexing. */
struct USpec {
  int dim = 0;
  int n_obs = 0;
  int n_latent = 0;
  std::vector<std::uint8_t> is_z;       //!< per u index
  std::vector<int> coord;               //!< u index -> plan position
  std::vector<int> slot;                //!< u index -> row of A (latent) or B (observed)
  std::vector<std::vector<int>> g;      //!< conditioning u indices, ascending
  bool nested_full = false;             //!< estimation plan with complete latent conditioning
};

USpec make_uspec(const OrderingPlan& plan);
USpec make_uspec(const PredictionPlan& plan);

/*! Numeric factor for one parameter value: the sparse triangular U over the
 *  joint sequence, the implied posterior precision W = A A' of the latent
 *  values given the responses, and its reverse-ordered Cholesky factor. */
struct VecchiaFactor {
  const USpec* spec = nullptr;  //!< owned by the template that built this
  CovParams params;
  SparseUpperTri U;
  SparseSym W;
  ReverseCholesky chol;

  double sum_log_u_diag() const { return U.sum_log_diag(); }
  double sum_log_v_diag() const { return chol.sum_log_diag(); }

  VecX bt_mul(const VecX& x) const;  //!< B' x, x over observed rows
  VecX at_mul(const VecX& y) const;  //!< A' y, y over latent rows
  VecX a_mul(const VecX& v) const;   //!< A v, v over the joint sequence
  VecX b_mul(const VecX& v) const;   //!< B v
  VecX w_inv_mul(VecX v) const {
    chol.solve_w_inv(v);
    return v;
  }
};

/*! Reusable structure for a fixed plan: the u-sequence, the symbolic pattern
 *  of W, and the symbolic Cholesky analysis. Each build() fills numeric
 *  values for one theta, which is the per-evaluation cost inside the
 *  covariance-parameter search. */
class FactorTemplate {
 public:
  FactorTemplate(const OrderingPlan& plan, const CoordSet& coords);
  FactorTemplate(const PredictionPlan& plan, const CoordSet& obs,
                 const CoordSet& pred);

  VecchiaFactor build(const CovParams& params) const;

  const USpec& spec() const { return spec_; }
  const std::vector<int>& order() const { return order_; }
  const CoordSet& plan_coords() const { return plan_coords_; }

 private:
  void finish_setup();

  USpec spec_;
  std::vector<int> order_;
  CoordSet plan_coords_;            //!< coordinates in plan order
  SparseSym w_pattern_;             //!< values zeroed
  std::unique_ptr<ReverseCholesky> chol_proto_;  //!< symbolic analysis only
};

/*! Build the sparse triangular factor for a u-sequence: column i holds
 *  -b_i / sqrt(r_i) at the rows of its conditioning set and 1 / sqrt(r_i) on
 *  the diagonal, where b_i and r_i are the regression coefficients and
 *  residual variance of u_i on its conditioning variables. Near-singular
 *  conditioning blocks get escalating diagonal jitter before failing. */
SparseUpperTri build_U(const USpec& spec, const std::vector<ScaledCoord>& pts,
                       const CovParams& params);

//! Convenience overloads matching the plan types directly.
SparseUpperTri build_U(const OrderingPlan& plan, const CoordSet& coords,
                       const CovParams& params);
SparseUpperTri build_U(const PredictionPlan& plan, const CoordSet& obs,
                       const CoordSet& pred, const CovParams& params);

//! Split U into its latent rows A and observed rows B.
void split_AB(const USpec& spec, const SparseUpperTri& u, SparseRowMatrix& a,
              SparseRowMatrix& b);

//! Symbolic pattern of W = A A' implied by the u-sequence.
SparseSym w_pattern(const USpec& spec);

//! Fill numeric values of W = A A' into a matrix with the pattern above.
void assemble_w(const USpec& spec, const SparseUpperTri& u, SparseSym& w);

}  // namespace lurk

#endif  // LURK_VECCHIA_HPP
