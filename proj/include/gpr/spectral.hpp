#pragma once

#include <cstdint>

#include "gpr/operators.hpp"
#include "gpr/types.hpp"

namespace gpr {

// Result of an extreme-eigenpair computation. The residual ||W u - value u||
// is always recomputed and reported, never assumed.
struct EigResult {
  double value = 0.0;
  Vec vector;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct PowerOpts {
  double tol = 1e-8;
  int maxit = 0; // 0 means 10 * n
  std::uint64_t seed = 0;
};

// Largest ALGEBRAIC eigenpair of a symmetric operator.
//
// Power iteration applied to op + sigma*I, where sigma is an estimate of
// an upper bound on the spectrum magnitude taken from 10 random sign
// probes (doubled for safety). The shift maps the largest algebraic
// eigenvalue to the largest magnitude one, which plain power iteration
// then finds; sigma is subtracted on return. On an indefinite operator
// this avoids converging to a dominant negative eigenvalue.
EigResult evec_max_algebraic(const LinearOp& op, const PowerOpts& opts = {});

// Largest MAGNITUDE eigenpair (plain power iteration); value keeps its
// sign. Stalls on |lambda_1| ~ |lambda_n| ties are reported through
// converged = false.
EigResult evec_max_magnitude(const LinearOp& op, const PowerOpts& opts = {});

// Full symmetric eigendecomposition, values descending, vectors
// orthonormal in the matching column order. Guarded to n <= 2000; used as
// the test oracle and as the tiny-eig step of the low-rank update.
struct DenseEig {
  Vec values;
  Mat vectors;
};
DenseEig dense_eig_reference(const Mat& W);

// Economy-size QR of an n-by-k matrix, k <= n. Rank deficiency is legal:
// R may carry (near-)zero diagonal entries.
struct ThinQR {
  Mat Q; // n-by-k, orthonormal columns
  Mat R; // k-by-k, upper triangular
};
ThinQR qr_thin(const Mat& M);

} // namespace gpr
