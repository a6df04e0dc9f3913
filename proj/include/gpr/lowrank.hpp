#pragma once

#include "gpr/spectral.hpp"
#include "gpr/types.hpp"

namespace gpr {

// Which eigenpairs survive a prune. The PSD-gauge solvers need the
// algebraically largest eigenpairs (the gradient comes from lambda_max);
// the nuclear gauge tracks the dominant magnitude instead.
enum class PruneRule { LargestAlgebraic, LargestMagnitude };

// Rank-r symmetric factorization U diag(D) U^T of the running dual matrix.
// Columns of U are orthonormal; D is sorted descending by value. Factors
// are immutable values: updates return new factors.
struct LowRankFactor {
  Mat U; // n-by-r, orthonormal columns
  Vec D; // length r, descending

  int rows() const { return static_cast<int>(U.rows()); }
  int rank() const { return static_cast<int>(U.cols()); }

  static LowRankFactor empty(int n) { return {Mat(n, 0), Vec(0)}; }

  // Dense U diag(D) U^T; small n only.
  Mat reconstruct() const;

  // Column index holding the eigenpair the given rule considers dominant.
  int leading_index(PruneRule rule) const;
};

// One step of the low-rank maintenance scheme: absorbs the rank-|I|
// correction sum_{i in I} delta_y_i a_i a_i^T into the factor.
//
// Stacks [U | A_I], takes a thin QR, forms the (r+|I|)-square core
// R * blockdiag(D, diag(delta_y)) * R^T, eigendecomposes it with the dense
// reference solver, rotates back, and prunes to r_out. Cost is
// O(n (r+|I|)^2 + (r+|I|)^3); the n-by-n matrix is never formed.
LowRankFactor lowrank_update(const LowRankFactor& factor, const Mat& A_I, const Vec& delta_y,
                             int r_out, PruneRule rule = PruneRule::LargestAlgebraic);

// Keeps the r eigenpairs selected by the rule (identity when r >= rank).
LowRankFactor prune_rank(const LowRankFactor& factor, int r,
                         PruneRule rule = PruneRule::LargestAlgebraic);

} // namespace gpr
