#include "gpr/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "gpr/errors.hpp"
#include "gpr/rng.hpp"

namespace gpr {

namespace {

// Plain power iteration on op + shift*I. The reported value and residual
// are for the UNSHIFTED operator: (W + sI)v - (l + s)v == Wv - lv.
EigResult power_iteration(const LinearOp& op, double shift, const PowerOpts& opts) {
  const int n = op.n;
  const int maxit = opts.maxit > 0 ? opts.maxit : 10 * n;
  Rng rng(derive_seed(opts.seed, "power-start"));

  Vec v = rng.unit_vector(n);
  Vec w(n);
  EigResult res;
  bool restarted = false;

  for (int k = 1; k <= maxit; ++k) {
    op.apply(v, w);
    if (shift != 0.0) w += shift * v;
    const double rayleigh_shifted = v.dot(w);
    const double value = rayleigh_shifted - shift;
    const double residual = (w - rayleigh_shifted * v).norm();

    res.value = value;
    res.vector = v;
    res.residual = residual;
    res.iterations = k;
    if (residual <= opts.tol * std::max(1.0, std::abs(value))) {
      res.converged = true;
      return res;
    }

    const double norm = w.norm();
    if (norm == 0.0) {
      // v is an exact eigenvector of the shifted operator's kernel; it is
      // the wrong extreme, so restart once from a fresh direction.
      if (restarted) return res;
      restarted = true;
      v = rng.unit_vector(n);
      continue;
    }
    v = w / norm;
  }
  return res; // converged stays false; caller decides
}

// Lower-bound estimate of the spectral radius from `probes` matvec probes
// (norm-ratio power steps from a seeded random start).
double spectral_radius_estimate(const LinearOp& op, std::uint64_t seed, int probes) {
  Rng rng(derive_seed(seed, "power-shift"));
  Vec v = rng.unit_vector(op.n);
  Vec w(op.n);
  double best = 0.0;
  for (int k = 0; k < probes; ++k) {
    op.apply(v, w);
    const double norm = w.norm();
    best = std::max(best, norm); // ||v|| == 1, so this ratio is <= ||W||_2
    if (norm == 0.0) break;
    v = w / norm;
  }
  return best;
}

} // namespace

EigResult evec_max_algebraic(const LinearOp& op, const PowerOpts& opts) {
  const double radius = spectral_radius_estimate(op, opts.seed, 10);
  if (radius == 0.0) {
    // Operator is (numerically) zero on everything we probed.
    Rng rng(derive_seed(opts.seed, "power-start"));
    Vec v = rng.unit_vector(op.n);
    Vec w(op.n);
    op.apply(v, w);
    EigResult res;
    res.value = 0.0;
    res.vector = v;
    res.residual = w.norm();
    res.iterations = 0;
    res.converged = res.residual <= opts.tol;
    return res;
  }
  // Doubling the (lower-bound) estimate makes op + sigma*I positive
  // semidefinite in all but pathological cases, so the dominant eigenvalue
  // of the shifted operator is lambda_max + sigma.
  const double sigma = 2.0 * radius;
  return power_iteration(op, sigma, opts);
}

EigResult evec_max_magnitude(const LinearOp& op, const PowerOpts& opts) {
  return power_iteration(op, 0.0, opts);
}

DenseEig dense_eig_reference(const Mat& W) {
  const int n = static_cast<int>(W.rows());
  if (W.cols() != n) throw DimensionError("dense_eig_reference: matrix must be square");
  if (n > 2000) throw InvalidInputError("dense_eig_reference: n > 2000");
  const double scale = W.norm();
  if ((W - W.transpose()).norm() > 1e-10 * std::max(scale, 1e-300))
    throw InvalidInputError("dense_eig_reference: matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Mat> es(W);
  if (es.info() != Eigen::Success)
    throw NumericalError("dense_eig_reference: eigensolver failed");

  // Eigen returns ascending order; flip to descending.
  DenseEig out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

ThinQR qr_thin(const Mat& M) {
  const int n = static_cast<int>(M.rows());
  const int k = static_cast<int>(M.cols());
  if (k > n) throw DimensionError("qr_thin: need k <= n");
  ThinQR out;
  if (k == 0) {
    out.Q = Mat(n, 0);
    out.R = Mat(0, 0);
    return out;
  }
  Eigen::HouseholderQR<Mat> qr(M);
  out.Q = qr.householderQ() * Mat::Identity(n, k);
  out.R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return out;
}

} // namespace gpr
