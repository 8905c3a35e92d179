/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#ifndef LURK_SPARSE_HPP
#define LURK_SPARSE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "lurk/types.hpp"

namespace lurk {

/*! Sparse upper-triangular matrix, column-compressed. Off-diagonal entries
 *  are stored strictly upper with ascending rows per column; the diagonal is
 *  kept separately so log-determinants are O(n). */
struct SparseUpperTri {
  int n = 0;
  std::vector<std::int64_t> col_ptr;  //!< size n+1
  std::vector<int> rows;              //!< row < column, ascending per column
  std::vector<double> vals;
  std::vector<double> diag;           //!< size n, positive

  std::int64_t nnz_offdiag() const { return col_ptr.empty() ? 0 : col_ptr[static_cast<size_t>(n)]; }
  double sum_log_diag() const;
  //! max off-diagonal entries in any column
  int max_col_nnz() const;
};

//! y = T x
VecX utri_mul(const SparseUpperTri& t, const VecX& x);
//! y = T' x
VecX utri_tmul(const SparseUpperTri& t, const VecX& x);

/*! Solve T x = b (transpose=false, back substitution) or T' x = b
 *  (transpose=true, forward substitution). O(nnz). */
VecX tri_solve(const SparseUpperTri& t, const VecX& b, bool transpose = false);

/*! Symmetric sparse matrix stored as its upper triangle in CSC form with the
 *  diagonal included (last entry of each column). */
struct SparseSym {
  int n = 0;
  std::vector<std::int64_t> col_ptr;
  std::vector<int> rows;  //!< ascending; final row of column j equals j
  std::vector<double> vals;

  MatX to_dense() const;  // oracle/test use
};

/*! Cholesky factorization of a sparse SPD matrix W under reverse row-column
 *  ordering, W = V V' with V upper triangular in the original indexing.
 *
 *  Internally the factor is held as the lower-triangular L of P W P' where P
 *  reverses the index order; the symbolic analysis (elimination tree, fill
 *  pattern, column counts) is done once and reused across numeric
 *  refactorizations with the same pattern, which is what the parameter
 *  optimization loop needs. */
class ReverseCholesky {
 public:
  //! symbolic analysis only; call factor() before any solve
  explicit ReverseCholesky(const SparseSym& w);

  //! numeric factorization; requires the same pattern as the analyzed matrix
  void factor(const SparseSym& w);

  int size() const { return n_; }
  bool factored() const { return factored_; }

  //! sum of log V_ii (= 0.5 log det W)
  double sum_log_diag() const;

  //! V with V V' = W, upper triangular in the original ordering
  SparseUpperTri v_factor() const;

  //! x := V^{-1} x
  void solve_v(VecX& x) const;
  //! x := V'^{-1} x
  void solve_vt(VecX& x) const;
  //! x := W^{-1} x (two triangular solves)
  void solve_w_inv(VecX& x) const;

 private:
  friend class SelectedInverse;

  void analyze(const SparseSym& w);

  int n_ = 0;
  bool factored_ = false;
  // reversed-space copy M = P W P' (upper CSC, diag last per column)
  std::vector<std::int64_t> mp_;
  std::vector<int> mi_;
  std::vector<std::int64_t> wslot_;  //!< M entry -> source entry in W
  std::vector<double> mx_;
  // elimination tree and factor L of M (lower CSC, diag first per column)
  std::vector<int> parent_;
  std::vector<std::int64_t> lp_;
  std::vector<int> li_;
  std::vector<double> lx_;
};

//! Convenience wrapper: analyze + factor, returning V.
SparseUpperTri reverse_cholesky(const SparseSym& w);

/*! Entries of W^{-1} on the sparsity pattern of the factor (V + V'),
 *  computed exactly by the Takahashi recursions in O(n m^2) for factors
 *  with at most m off-diagonal entries per column. */
class SelectedInverse {
 public:
  explicit SelectedInverse(const ReverseCholesky& chol);

  //! (W^{-1})_{ii}
  double diag(int i) const;

  //! (W^{-1})_{ij} when (i, j) lies in the factor pattern, nullopt otherwise
  std::optional<double> entry(int i, int j) const;

 private:
  int n_;
  std::vector<std::int64_t> zp_;
  std::vector<int> zi_;
  std::vector<double> zx_;
};

//! Convenience wrapper matching the factor-level API.
inline SelectedInverse takahashi_selected_inverse(const ReverseCholesky& chol) {
  return SelectedInverse(chol);
}

}  // namespace lurk

#endif  // LURK_SPARSE_HPP
