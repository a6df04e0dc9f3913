#include "gpr/operators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "gpr/errors.hpp"
#include "gpr/kernels.hpp"
#include "gpr/rng.hpp"
#include "gpr/spectral.hpp"

namespace gpr {

MeasurementEnsemble::MeasurementEnsemble(RowMat vectors) : vectors_(std::move(vectors)) {
  if (vectors_.rows() < 1 || vectors_.cols() < 1)
    throw InvalidInputError("ensemble: need m >= 1 and n >= 1");
  if (!vectors_.allFinite()) throw InvalidInputError("ensemble: non-finite entry");
  for (int i = 0; i < vectors_.rows(); ++i) {
    if (vectors_.row(i).cwiseAbs().maxCoeff() == 0.0)
      throw InvalidInputError("ensemble: row " + std::to_string(i) + " is identically zero");
  }
}

Observations::Observations(Vec values) : b(std::move(values)) {
  if (b.size() < 1) throw InvalidInputError("observations: empty");
  if (!b.allFinite()) throw InvalidInputError("observations: non-finite entry");
  if (b.cwiseAbs().maxCoeff() == 0.0)
    throw InvalidInputError("observations: all entries are zero");
}

GroundTruth::GroundTruth(Vec signal) : x(std::move(signal)) {
  if (x.size() < 1 || x.norm() == 0.0) throw InvalidInputError("ground truth: zero signal");
}

Vec forward_rank1(const MeasurementEnsemble& ens, const Vec& u) {
  if (u.size() != ens.n()) throw DimensionError("forward_rank1: u has wrong length");
  Vec out;
  kernels::forward_rank1(ens.vectors(), u, out);
  return out;
}

Vec forward_full(const MeasurementEnsemble& ens, const Mat& X) {
  if (X.rows() != ens.n() || X.cols() != ens.n())
    throw DimensionError("forward_full: X has wrong shape");
  const double scale = X.norm();
  if ((X - X.transpose()).norm() > 1e-10 * scale)
    throw InvalidInputError("forward_full: X is not symmetric");
  Vec out;
  kernels::forward_full(ens.vectors(), X, out);
  return out;
}

Mat adjoint_dense(const MeasurementEnsemble& ens, const Vec& y) {
  if (y.size() != ens.m()) throw DimensionError("adjoint_dense: y has wrong length");
  Mat W;
  kernels::adjoint_dense(ens.vectors(), y, W);
  return W;
}

Vec adjoint_matvec(const MeasurementEnsemble& ens, const Vec& y, const Vec& v) {
  if (y.size() != ens.m()) throw DimensionError("adjoint_matvec: y has wrong length");
  if (v.size() != ens.n()) throw DimensionError("adjoint_matvec: v has wrong length");
  Vec out;
  kernels::adjoint_matvec(ens.vectors(), y, v, out);
  return out;
}

AdjointOperator::AdjointOperator(const MeasurementEnsemble& ens, Vec y)
    : ens_(&ens), y_(std::move(y)), full_(true) {
  if (y_.size() != ens.m()) throw DimensionError("adjoint operator: y has wrong length");
}

AdjointOperator::AdjointOperator(const MeasurementEnsemble& ens, Vec y, std::vector<int> subset)
    : ens_(&ens), y_(std::move(y)), subset_(std::move(subset)), full_(false) {
  if (y_.size() != ens.m()) throw DimensionError("adjoint operator: y has wrong length");
  if (subset_.empty()) throw InvalidInputError("adjoint operator: empty index set");
  for (int i : subset_)
    if (i < 0 || i >= ens.m())
      throw InvalidInputError("adjoint operator: index out of range");
}

void AdjointOperator::apply(const Vec& v, Vec& out) const {
  if (v.size() != ens_->n()) throw DimensionError("adjoint operator: v has wrong length");
  if (full_)
    kernels::adjoint_matvec(ens_->vectors(), y_, v, out);
  else
    kernels::adjoint_matvec_subset(ens_->vectors(), y_, subset_, v, out);
}

Vec AdjointOperator::apply(const Vec& v) const {
  Vec out;
  apply(v, out);
  return out;
}

LinearOp as_linear_op(const AdjointOperator& op) {
  return {op.dim(), [&op](const Vec& v, Vec& out) { op.apply(v, out); }};
}

LinearOp as_linear_op(const Mat& W) {
  return {static_cast<int>(W.rows()), [&W](const Vec& v, Vec& out) { out = W * v; }};
}

Instance gen_gaussian(int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw InvalidInputError("gen_gaussian: need m >= 1 and n >= 1");
  Rng row_rng(derive_seed(seed, "ensemble"));
  RowMat A(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = row_rng.normal();
  Rng sig_rng(derive_seed(seed, "signal"));
  Vec x = sig_rng.normal_vector(n);
  MeasurementEnsemble ens(std::move(A));
  Vec b = forward_rank1(ens, x);
  return Instance{std::move(ens), Observations(std::move(b)), GroundTruth(std::move(x)),
                  InstanceMeta{"gaussian", seed, 0, 0}};
}

MeasurementEnsemble gen_hadamard(int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw InvalidInputError("gen_hadamard: need m >= 1 and n >= 1");
  const unsigned target = static_cast<unsigned>(std::max(m, n));
  const int order = static_cast<int>(std::bit_ceil(target));
  if (m > order) throw InvalidInputError("gen_hadamard: m exceeds the Hadamard order");

  Rng rng(derive_seed(seed, "rows"));
  const std::vector<int> rows = sample_without_replacement(order, m, rng);

  // Sylvester construction: H(i, j) = (-1)^popcount(i & j).
  RowMat A(m, n);
  for (int i = 0; i < m; ++i) {
    const unsigned r = static_cast<unsigned>(rows[i]);
    for (int j = 0; j < n; ++j)
      A(i, j) = (std::popcount(r & static_cast<unsigned>(j)) & 1) ? -1.0 : 1.0;
  }
  return MeasurementEnsemble(std::move(A));
}

Instance make_instance(MeasurementEnsemble ens, Vec x, InstanceMeta meta) {
  if (x.size() != ens.n()) throw DimensionError("make_instance: signal has wrong length");
  Vec b = forward_rank1(ens, x);
  return Instance{std::move(ens), Observations(std::move(b)), GroundTruth(std::move(x)),
                  std::move(meta)};
}

MeasurementEnsemble from_diag_sdp(const Mat& C, const Vec& d) {
  const int n = static_cast<int>(C.rows());
  if (C.cols() != n) throw DimensionError("from_diag_sdp: C must be square");
  if (d.size() != n) throw DimensionError("from_diag_sdp: diagonal has wrong length");
  if (!(d.minCoeff() > 0.0)) throw InvalidInputError("from_diag_sdp: diagonal must be positive");
  if (!C.allFinite()) throw InvalidInputError("from_diag_sdp: non-finite entry in C");

  // Shifting the symmetrized C by a multiple of the identity leaves the
  // diagonally constrained problem unchanged, so make it safely positive
  // definite before factoring.
  Mat S = 0.5 * (C + C.transpose());
  const DenseEig eig = dense_eig_reference(S);
  const double lambda_min = eig.values[eig.values.size() - 1];
  const double shift = std::max(0.0, -lambda_min) + 1.0;
  S.diagonal().array() += shift;

  Eigen::LLT<Mat> llt(S);
  if (llt.info() != Eigen::Success)
    throw NumericalError("from_diag_sdp: Cholesky failed after diagonal shift");
  const Mat L = llt.matrixL();

  // Row i of the ensemble is column i of L^{-1}, one triangular solve each.
  RowMat A(n, n);
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e[i] = 1.0;
    A.row(i) = L.triangularView<Eigen::Lower>().solve(e).transpose();
  }
  return MeasurementEnsemble(std::move(A));
}

} // namespace gpr
