#include "gpr/kernels.hpp"

#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gpr/errors.hpp"

namespace gpr {

namespace {

// Shared per-row primitives. Both the serial and the OpenMP variants go
// through these, so a single row always produces the same bits.
inline double dot_n(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += a[j] * b[j];
  return s;
}

inline void axpy_n(double c, const double* a, double* y, int n) {
  for (int j = 0; j < n; ++j) y[j] += c * a[j];
}

inline double quad_row(const double* ai, const Mat& X, double* scratch, int n) {
  // scratch = X a_i, then a_i . scratch
  for (int j = 0; j < n; ++j) scratch[j] = dot_n(X.col(j).data(), ai, n);
  return dot_n(ai, scratch, n);
}

} // namespace

namespace serial {

void forward_rank1(const RowMat& A, const Vec& u, Vec& out) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  out.resize(m);
  for (int i = 0; i < m; ++i) {
    const double d = dot_n(A.data() + static_cast<std::ptrdiff_t>(i) * n, u.data(), n);
    out[i] = d * d;
  }
}

void forward_full(const RowMat& A, const Mat& X, Vec& out) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  out.resize(m);
  std::vector<double> scratch(n);
  for (int i = 0; i < m; ++i)
    out[i] = quad_row(A.data() + static_cast<std::ptrdiff_t>(i) * n, X, scratch.data(), n);
}

void adjoint_dense(const RowMat& A, const Vec& y, Mat& W) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  W.resize(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += y[i] * A(i, j) * A(i, k);
      W(j, k) = s;
      W(k, j) = s;
    }
  }
}

void adjoint_matvec(const RowMat& A, const Vec& y, const Vec& v, Vec& out) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  out.setZero(n);
  for (int i = 0; i < m; ++i) {
    const double* ai = A.data() + static_cast<std::ptrdiff_t>(i) * n;
    const double c = y[i] * dot_n(ai, v.data(), n);
    axpy_n(c, ai, out.data(), n);
  }
}

void adjoint_matvec_subset(const RowMat& A, const Vec& y, std::span<const int> idx,
                           const Vec& v, Vec& out) {
  const int n = static_cast<int>(A.cols());
  out.setZero(n);
  for (int i : idx) {
    const double* ai = A.data() + static_cast<std::ptrdiff_t>(i) * n;
    const double c = y[i] * dot_n(ai, v.data(), n);
    axpy_n(c, ai, out.data(), n);
  }
}

double ncvx_objective(const RowMat& A, const Vec& b, const Vec& u) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  double s = 0.0;
  for (int i = 0; i < m; ++i) {
    const double d = dot_n(A.data() + static_cast<std::ptrdiff_t>(i) * n, u.data(), n);
    const double r = d * d - b[i];
    s += r * r;
  }
  return s;
}

void ncvx_gradient(const RowMat& A, const Vec& b, const Vec& u, Vec& g) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  g.setZero(n);
  for (int i = 0; i < m; ++i) {
    const double* ai = A.data() + static_cast<std::ptrdiff_t>(i) * n;
    const double d = dot_n(ai, u.data(), n);
    axpy_n(4.0 * (d * d - b[i]) * d, ai, g.data(), n);
  }
}

} // namespace serial

namespace kernels {

#ifdef _OPENMP

void forward_rank1(const RowMat& A, const Vec& u, Vec& out) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  out.resize(m);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) {
    const double d = dot_n(A.data() + static_cast<std::ptrdiff_t>(i) * n, u.data(), n);
    out[i] = d * d;
  }
}

void forward_full(const RowMat& A, const Mat& X, Vec& out) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  out.resize(m);
#pragma omp parallel
  {
    std::vector<double> scratch(n);
#pragma omp for schedule(static)
    for (int i = 0; i < m; ++i)
      out[i] = quad_row(A.data() + static_cast<std::ptrdiff_t>(i) * n, X, scratch.data(), n);
  }
}

void adjoint_dense(const RowMat& A, const Vec& y, Mat& W) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  W.resize(n, n);
  // Each upper-triangle entry sums over i in a fixed order, so the result
  // does not depend on the schedule.
#pragma omp parallel for schedule(dynamic, 4)
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += y[i] * A(i, j) * A(i, k);
      W(j, k) = s;
      W(k, j) = s;
    }
  }
}

namespace {

// Reduce row contributions c_i * a_i into per-thread partial vectors and
// merge them in thread order.
template <typename RowCoeff>
void rank1_accumulate(const RowMat& A, int m, int n, Vec& out, RowCoeff coeff) {
  const int max_threads = omp_get_max_threads();
  std::vector<Vec> partial(max_threads);
#pragma omp parallel
  {
    const int tid = omp_get_thread_num();
    Vec local = Vec::Zero(n);
#pragma omp for schedule(static)
    for (int i = 0; i < m; ++i) {
      const double* ai = A.data() + static_cast<std::ptrdiff_t>(i) * n;
      axpy_n(coeff(i, ai), ai, local.data(), n);
    }
    partial[tid] = std::move(local);
  }
  out.setZero(n);
  for (const Vec& p : partial)
    if (p.size() == n) out += p;
}

} // namespace

void adjoint_matvec(const RowMat& A, const Vec& y, const Vec& v, Vec& out) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  rank1_accumulate(A, m, n, out,
                   [&](int i, const double* ai) { return y[i] * dot_n(ai, v.data(), n); });
}

void adjoint_matvec_subset(const RowMat& A, const Vec& y, std::span<const int> idx,
                           const Vec& v, Vec& out) {
  const int n = static_cast<int>(A.cols());
  const int p = static_cast<int>(idx.size());
  const int max_threads = omp_get_max_threads();
  std::vector<Vec> partial(max_threads);
#pragma omp parallel
  {
    const int tid = omp_get_thread_num();
    Vec local = Vec::Zero(n);
#pragma omp for schedule(static)
    for (int t = 0; t < p; ++t) {
      const int i = idx[t];
      const double* ai = A.data() + static_cast<std::ptrdiff_t>(i) * n;
      const double c = y[i] * dot_n(ai, v.data(), n);
      axpy_n(c, ai, local.data(), n);
    }
    partial[tid] = std::move(local);
  }
  out.setZero(n);
  for (const Vec& p2 : partial)
    if (p2.size() == n) out += p2;
}

double ncvx_objective(const RowMat& A, const Vec& b, const Vec& u) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  const int max_threads = omp_get_max_threads();
  std::vector<double> partial(max_threads, 0.0);
#pragma omp parallel
  {
    const int tid = omp_get_thread_num();
    double local = 0.0;
#pragma omp for schedule(static)
    for (int i = 0; i < m; ++i) {
      const double d = dot_n(A.data() + static_cast<std::ptrdiff_t>(i) * n, u.data(), n);
      const double r = d * d - b[i];
      local += r * r;
    }
    partial[tid] = local;
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

void ncvx_gradient(const RowMat& A, const Vec& b, const Vec& u, Vec& g) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  rank1_accumulate(A, m, n, g, [&](int i, const double* ai) {
    const double d = dot_n(ai, u.data(), n);
    return 4.0 * (d * d - b[i]) * d;
  });
}

#else // !_OPENMP: the parallel entry points fall back to the serial twins.

void forward_rank1(const RowMat& A, const Vec& u, Vec& out) { serial::forward_rank1(A, u, out); }
void forward_full(const RowMat& A, const Mat& X, Vec& out) { serial::forward_full(A, X, out); }
void adjoint_dense(const RowMat& A, const Vec& y, Mat& W) { serial::adjoint_dense(A, y, W); }
void adjoint_matvec(const RowMat& A, const Vec& y, const Vec& v, Vec& out) {
  serial::adjoint_matvec(A, y, v, out);
}
void adjoint_matvec_subset(const RowMat& A, const Vec& y, std::span<const int> idx,
                           const Vec& v, Vec& out) {
  serial::adjoint_matvec_subset(A, y, idx, v, out);
}
double ncvx_objective(const RowMat& A, const Vec& b, const Vec& u) {
  return serial::ncvx_objective(A, b, u);
}
void ncvx_gradient(const RowMat& A, const Vec& b, const Vec& u, Vec& g) {
  serial::ncvx_gradient(A, b, u, g);
}

#endif

} // namespace kernels
} // namespace gpr
