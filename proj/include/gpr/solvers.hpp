#pragma once

#include <functional>
#include <vector>

#include "gpr/dual.hpp"
#include "gpr/lowrank.hpp"

namespace gpr {

// Current dual iterate. z is populated only by the reduced/coordinate
// methods; eig is the last extreme eigenpair of A*(y).
struct DualState {
  Vec y;
  Vec z;
  EigResult eig;
  double objective = 0.0;
  int iterations = 0;
};

struct TrajectoryPoint {
  int iteration = 0;
  double approx_objective = 0.0; // estimate available for free at this iterate
  double exact_objective = 0.0;  // NaN when not computed this iteration
  double step = 0.0;             // step taken to reach this iterate (NaN at k = 0)
  double elapsed_seconds = 0.0;
};

struct SolveOptions {
  Gauge gauge = Gauge::TracePsd;
  SamplingRegime regime;   // projected/reduced gradient only
  StepPolicy step = StepPolicy::fixed(0.1);
  int iters = 100;
  std::uint64_t seed = 0;
  PowerOpts spectral;      // eigensolver tolerance/budget per gradient

  // Coordinate-descent knobs.
  int rank = 5;
  int block = 100;
  CoordScheme scheme = CoordScheme::Weighted;
  int refresh_every = 50;            // rebuild the factor every k iterations
  double refresh_residual_tol = 1e-2;
  int residual_check_every = 10;     // how often the O(mn) residual probe runs

  // For subsampled regimes: also record the exact objective every K
  // iterations (0 = never). Full-gradient runs record it for free.
  int exact_objective_every = 0;

  bool record_timings = true; // false zeroes elapsed-seconds for byte-stable output

  // Test/instrumentation hook, called with every iterate (including the
  // initial one).
  std::function<void(int iteration, const Vec& y)> on_iterate;
};

struct SolveResult {
  DualState state;
  std::vector<TrajectoryPoint> trajectory;
  LowRankFactor factor = LowRankFactor::empty(0); // coordinate descent only
};

// Projected gradient on the constrained dual: y+ = proj(y - t g),
// initialized at b / <b,b>.
SolveResult solve_projected_gradient(const MeasurementEnsemble& ens, const Vec& b,
                                     const SolveOptions& opts);

// Reduced gradient on the unconstrained dual: z+ = z - t B^T g with
// y = B z + anchor (feasible by construction), initialized at z = 0.
SolveResult solve_reduced_gradient(const MeasurementEnsemble& ens, const Vec& b,
                                   const NullBasis& basis, const SolveOptions& opts);

// Block coordinate descent with the sparse near-identity basis and a
// maintained rank-r factor of A*(y); never forms an n-by-n matrix except
// during a refresh.
SolveResult solve_coordinate_descent(const MeasurementEnsemble& ens, const Vec& b,
                                     const SolveOptions& opts);

// Rebuilds a rank-r factor of A*(y) from scratch: dense accumulation and
// truncated eigendecomposition for n <= 2000, chunked low-rank updates at
// double working rank beyond that.
LowRankFactor refresh_factor(const MeasurementEnsemble& ens, const Vec& y, int r,
                             PruneRule rule);

} // namespace gpr
