#pragma once

#include <span>

#include "gpr/types.hpp"

// Data-parallel inner loops over the m measurement rows. Every kernel has
// a serial twin in gpr::serial with identical semantics; the OpenMP
// versions reduce per-thread partials in thread order under a static
// schedule, so results are reproducible for a fixed thread count and
// bit-identical to the serial twin when run on one thread.

namespace gpr::kernels {

// out[i] = (a_i . u)^2
void forward_rank1(const RowMat& A, const Vec& u, Vec& out);

// out[i] = a_i^T X a_i  (X symmetric n-by-n)
void forward_full(const RowMat& A, const Mat& X, Vec& out);

// W = sum_i y_i a_i a_i^T, built on the upper triangle and mirrored.
// Parallel over output entries; deterministic for any thread count.
void adjoint_dense(const RowMat& A, const Vec& y, Mat& W);

// out = sum_i y_i a_i (a_i . v)
void adjoint_matvec(const RowMat& A, const Vec& y, const Vec& v, Vec& out);

// Same restricted to the rows in idx.
void adjoint_matvec_subset(const RowMat& A, const Vec& y, std::span<const int> idx,
                           const Vec& v, Vec& out);

// sum_i ((a_i . u)^2 - b_i)^2
double ncvx_objective(const RowMat& A, const Vec& b, const Vec& u);

// g = 4 sum_i ((a_i . u)^2 - b_i) (a_i . u) a_i
void ncvx_gradient(const RowMat& A, const Vec& b, const Vec& u, Vec& g);

} // namespace gpr::kernels

namespace gpr::serial {

void forward_rank1(const RowMat& A, const Vec& u, Vec& out);
void forward_full(const RowMat& A, const Mat& X, Vec& out);
void adjoint_dense(const RowMat& A, const Vec& y, Mat& W);
void adjoint_matvec(const RowMat& A, const Vec& y, const Vec& v, Vec& out);
void adjoint_matvec_subset(const RowMat& A, const Vec& y, std::span<const int> idx,
                           const Vec& v, Vec& out);
double ncvx_objective(const RowMat& A, const Vec& b, const Vec& u);
void ncvx_gradient(const RowMat& A, const Vec& b, const Vec& u, Vec& g);

} // namespace gpr::serial
