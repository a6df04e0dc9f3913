#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gpr/types.hpp"

namespace gpr {

// The m measurement vectors a_i, one per row. Immutable after
// construction and safe to share across threads; every operation on an
// ensemble is pure.
class MeasurementEnsemble {
public:
  explicit MeasurementEnsemble(RowMat vectors);

  int m() const { return static_cast<int>(vectors_.rows()); }
  int n() const { return static_cast<int>(vectors_.cols()); }
  const RowMat& vectors() const { return vectors_; }
  Eigen::Map<const Vec> row(int i) const {
    return Eigen::Map<const Vec>(vectors_.data() + static_cast<std::ptrdiff_t>(i) * n(), n());
  }

private:
  RowMat vectors_;
};

// Squared-magnitude readings b. Finite, with at least one nonzero entry.
struct Observations {
  Vec b;
  explicit Observations(Vec values);
};

struct GroundTruth {
  Vec x; // ||x|| > 0
  explicit GroundTruth(Vec signal);
};

struct InstanceMeta {
  std::string generator; // "gaussian", "hadamard", "image", "diagsdp", ...
  std::uint64_t seed = 0;
  int image_height = 0; // nonzero when the signal is a flattened image
  int image_width = 0;
};

// A full problem instance: ensemble, observations, optional ground truth.
struct Instance {
  MeasurementEnsemble ensemble;
  Observations obs;
  std::optional<GroundTruth> truth;
  InstanceMeta meta;
};

// out_i = (a_i . u)^2
Vec forward_rank1(const MeasurementEnsemble& ens, const Vec& u);

// out_i = a_i^T X a_i; X must be symmetric to 1e-10 relative Frobenius.
Vec forward_full(const MeasurementEnsemble& ens, const Mat& X);

// sum_i y_i a_i a_i^T as a dense n-by-n matrix (small n only).
Mat adjoint_dense(const MeasurementEnsemble& ens, const Vec& y);

// (sum_i y_i a_i a_i^T) v without forming the matrix.
Vec adjoint_matvec(const MeasurementEnsemble& ens, const Vec& y, const Vec& v);

// Matrix-free handle for W = sum_{i in subset} y_i a_i a_i^T. The full
// constructor takes subset = {0..m-1}.
class AdjointOperator {
public:
  AdjointOperator(const MeasurementEnsemble& ens, Vec y);
  AdjointOperator(const MeasurementEnsemble& ens, Vec y, std::vector<int> subset);

  int dim() const { return ens_->n(); }
  void apply(const Vec& v, Vec& out) const;
  Vec apply(const Vec& v) const;
  bool full() const { return full_; }
  const std::vector<int>& subset() const { return subset_; }

private:
  const MeasurementEnsemble* ens_;
  Vec y_;
  std::vector<int> subset_;
  bool full_;
};

// Minimal symmetric-operator interface for the iterative eigensolvers.
struct LinearOp {
  int n = 0;
  std::function<void(const Vec&, Vec&)> apply;
};

LinearOp as_linear_op(const AdjointOperator& op);
LinearOp as_linear_op(const Mat& W);

// i.i.d. standard normal rows, standard normal signal, b = forward_rank1(x).
Instance gen_gaussian(int m, int n, std::uint64_t seed);

// m rows sampled uniformly without replacement from the Sylvester Hadamard
// matrix of order 2^ceil(log2(max(m,n))), truncated to the first n columns.
MeasurementEnsemble gen_hadamard(int m, int n, std::uint64_t seed);

// Pairs an ensemble with a known signal: b = forward_rank1(x).
Instance make_instance(MeasurementEnsemble ens, Vec x, InstanceMeta meta = {});

// Ingests min <C,W> s.t. diag(W) = d, W PSD into measurement form:
// symmetrize C, shift it positive definite, factor C = L L^T, and return
// the ensemble whose rows are the columns of L^{-1}.
MeasurementEnsemble from_diag_sdp(const Mat& C, const Vec& d);

} // namespace gpr
