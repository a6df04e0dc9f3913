#include "gpr/lowrank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gpr/errors.hpp"

namespace gpr {

Mat LowRankFactor::reconstruct() const {
  if (rank() == 0) return Mat::Zero(rows(), rows());
  return U * D.asDiagonal() * U.transpose();
}

int LowRankFactor::leading_index(PruneRule rule) const {
  if (rank() == 0) throw InvalidInputError("leading_index: empty factor");
  if (rule == PruneRule::LargestAlgebraic) return 0; // D is descending
  int best = 0;
  for (int j = 1; j < rank(); ++j)
    if (std::abs(D[j]) > std::abs(D[best])) best = j;
  return best;
}

namespace {

// Indices of the r entries of d favored by the rule, then reordered so the
// kept values remain descending.
std::vector<int> keep_indices(const Vec& d, int r, PruneRule rule) {
  std::vector<int> idx(d.size());
  std::iota(idx.begin(), idx.end(), 0);
  if (rule == PruneRule::LargestMagnitude) {
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return std::abs(d[a]) > std::abs(d[b]); });
  } else {
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] > d[b]; });
  }
  idx.resize(std::min<std::size_t>(idx.size(), static_cast<std::size_t>(r)));
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] > d[b]; });
  return idx;
}

LowRankFactor select(const Mat& U, const Vec& D, const std::vector<int>& idx) {
  LowRankFactor out;
  out.U.resize(U.rows(), static_cast<Eigen::Index>(idx.size()));
  out.D.resize(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    out.U.col(static_cast<Eigen::Index>(j)) = U.col(idx[j]);
    out.D[static_cast<Eigen::Index>(j)] = D[idx[j]];
  }
  return out;
}

} // namespace

LowRankFactor lowrank_update(const LowRankFactor& factor, const Mat& A_I, const Vec& delta_y,
                             int r_out, PruneRule rule) {
  if (r_out < 1) throw InvalidInputError("lowrank_update: r_out must be >= 1");
  const int n = factor.rows();
  const int r = factor.rank();
  const int p = static_cast<int>(A_I.cols());
  if (A_I.rows() != n) throw DimensionError("lowrank_update: A_I row count mismatch");
  if (delta_y.size() != p) throw DimensionError("lowrank_update: delta_y length mismatch");
  if (r + p == 0) throw InvalidInputError("lowrank_update: nothing to update");

  Mat stacked(n, r + p);
  if (r > 0) stacked.leftCols(r) = factor.U;
  if (p > 0) stacked.rightCols(p) = A_I;

  const ThinQR qr = qr_thin(stacked);

  Vec dtilde(r + p);
  if (r > 0) dtilde.head(r) = factor.D;
  if (p > 0) dtilde.tail(p) = delta_y;

  Mat core = qr.R * dtilde.asDiagonal() * qr.R.transpose();
  core = 0.5 * (core + core.transpose()); // kill roundoff asymmetry before the tiny eig
  const DenseEig eig = dense_eig_reference(core);

  Mat newU = qr.Q * eig.vectors;
  return prune_rank(LowRankFactor{std::move(newU), eig.values}, r_out, rule);
}

LowRankFactor prune_rank(const LowRankFactor& factor, int r, PruneRule rule) {
  if (r < 1) throw InvalidInputError("prune_rank: r must be >= 1");
  if (r >= factor.rank()) return factor;
  return select(factor.U, factor.D, keep_indices(factor.D, r, rule));
}

} // namespace gpr
