#include "gpr/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "gpr/errors.hpp"
#include "gpr/kernels.hpp"

namespace gpr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double gauge_value(Gauge gauge, double eigenvalue) {
  return gauge == Gauge::TracePsd ? std::max(eigenvalue, 0.0) : std::abs(eigenvalue);
}

class Stopwatch {
public:
  explicit Stopwatch(bool enabled) : enabled_(enabled), start_(clock::now()) {}
  double seconds() const {
    if (!enabled_) return 0.0;
    return std::chrono::duration<double>(clock::now() - start_).count();
  }

private:
  using clock = std::chrono::steady_clock;
  bool enabled_;
  clock::time_point start_;
};

// Shared skeleton of the projected and reduced methods; `step_to` maps a
// step length to the next iterate purely as a function of the current
// gradient.
struct GradientLoop {
  const MeasurementEnsemble& ens;
  const SolveOptions& opts;
  Rng rng;
  std::uint64_t obj_counter = 0;

  explicit GradientLoop(const MeasurementEnsemble& e, const SolveOptions& o)
      : ens(e), opts(o), rng(derive_seed(o.seed, "solver")) {}

  PowerOpts objective_opts() {
    PowerOpts p = opts.spectral;
    p.seed = derive_seed(opts.seed, "objective-eig", obj_counter++);
    return p;
  }

  double exact_objective(const Vec& y) {
    return dual_objective(ens, y, opts.gauge, objective_opts()).first;
  }
};

} // namespace

LowRankFactor refresh_factor(const MeasurementEnsemble& ens, const Vec& y, int r,
                             PruneRule rule) {
  if (r < 1) throw InvalidInputError("refresh_factor: r must be >= 1");
  const int n = ens.n();
  if (n <= 2000) {
    const Mat W = adjoint_dense(ens, y);
    const DenseEig eig = dense_eig_reference(W);
    return prune_rank(LowRankFactor{eig.vectors, eig.values}, r, rule);
  }
  // Large n: accumulate in chunks at double working rank, prune at the end.
  // This is a lossy rebuild; the paper-scale instances this library targets
  // keep n within the dense guard.
  const int chunk = std::max(2 * r, 64);
  LowRankFactor factor = LowRankFactor::empty(n);
  for (int start = 0; start < ens.m(); start += chunk) {
    const int count = std::min(chunk, ens.m() - start);
    Mat A_I(n, count);
    Vec dy(count);
    for (int t = 0; t < count; ++t) {
      A_I.col(t) = ens.row(start + t);
      dy[t] = y[start + t];
    }
    factor = lowrank_update(factor, A_I, dy, 2 * r, rule);
  }
  return prune_rank(factor, r, rule);
}

SolveResult solve_projected_gradient(const MeasurementEnsemble& ens, const Vec& b,
                                     const SolveOptions& opts) {
  if (b.size() != ens.m()) throw DimensionError("solve: b has wrong length");
  GradientLoop loop(ens, opts);
  const Stopwatch watch(opts.record_timings);
  const bool full = opts.regime.kind == RegimeKind::Full;

  Vec y = project_hyperplane(b, b); // = b / <b,b>
  if (opts.on_iterate) opts.on_iterate(0, y);

  SolveResult out;
  out.trajectory.reserve(opts.iters + 1);
  double last_step = kNaN;

  for (int k = 0; k < opts.iters; ++k) {
    GradientResult grad = dual_gradient(ens, y, opts.gauge, opts.regime, opts.spectral, loop.rng);
    const double approx = gauge_value(opts.gauge, grad.eig.value);
    if (std::isnan(approx)) throw NumericalError("projected gradient: objective became NaN");
    double exact = full ? approx : kNaN;
    if (!full && opts.exact_objective_every > 0 && k % opts.exact_objective_every == 0)
      exact = loop.exact_objective(y);
    out.trajectory.push_back({k, approx, exact, last_step, watch.seconds()});

    double t;
    if (opts.step.kind == StepPolicy::Kind::Backtracking) {
      const double f0 = full ? approx : (std::isnan(exact) ? loop.exact_objective(y) : exact);
      t = backtracking_step(opts.step, f0, grad.g.squaredNorm(), [&](double tt) {
        return loop.exact_objective(project_hyperplane(y - tt * grad.g, b));
      });
    } else {
      t = step_size(opts.step, k);
    }
    y = project_hyperplane(y - t * grad.g, b);
    last_step = t;
    if (opts.on_iterate) opts.on_iterate(k + 1, y);
  }

  auto [f_end, eig_end] = dual_objective(ens, y, opts.gauge, loop.objective_opts());
  out.trajectory.push_back({opts.iters, f_end, f_end, last_step, watch.seconds()});
  out.state = DualState{std::move(y), Vec(), std::move(eig_end), f_end, opts.iters};
  return out;
}

SolveResult solve_reduced_gradient(const MeasurementEnsemble& ens, const Vec& b,
                                   const NullBasis& basis, const SolveOptions& opts) {
  if (b.size() != ens.m()) throw DimensionError("solve: b has wrong length");
  if (basis.rows() != ens.m()) throw DimensionError("solve: basis does not match b");
  GradientLoop loop(ens, opts);
  const Stopwatch watch(opts.record_timings);
  const bool full = opts.regime.kind == RegimeKind::Full;

  Vec z = Vec::Zero(basis.cols());
  Vec y = basis.anchor();
  if (opts.on_iterate) opts.on_iterate(0, y);

  SolveResult out;
  out.trajectory.reserve(opts.iters + 1);
  double last_step = kNaN;

  for (int k = 0; k < opts.iters; ++k) {
    GradientResult grad = dual_gradient(ens, y, opts.gauge, opts.regime, opts.spectral, loop.rng);
    const double approx = gauge_value(opts.gauge, grad.eig.value);
    if (std::isnan(approx)) throw NumericalError("reduced gradient: objective became NaN");
    double exact = full ? approx : kNaN;
    if (!full && opts.exact_objective_every > 0 && k % opts.exact_objective_every == 0)
      exact = loop.exact_objective(y);
    out.trajectory.push_back({k, approx, exact, last_step, watch.seconds()});

    const Vec gz = basis.apply_transpose(grad.g);
    double t;
    if (opts.step.kind == StepPolicy::Kind::Backtracking) {
      const double f0 = full ? approx : (std::isnan(exact) ? loop.exact_objective(y) : exact);
      t = backtracking_step(opts.step, f0, gz.squaredNorm(), [&](double tt) {
        return loop.exact_objective(basis.apply(z - tt * gz) + basis.anchor());
      });
    } else {
      t = step_size(opts.step, k);
    }
    z -= t * gz;
    y = basis.apply(z) + basis.anchor();
    last_step = t;
    if (opts.on_iterate) opts.on_iterate(k + 1, y);
  }

  auto [f_end, eig_end] = dual_objective(ens, y, opts.gauge, loop.objective_opts());
  out.trajectory.push_back({opts.iters, f_end, f_end, last_step, watch.seconds()});
  out.state = DualState{std::move(y), std::move(z), std::move(eig_end), f_end, opts.iters};
  return out;
}

SolveResult solve_coordinate_descent(const MeasurementEnsemble& ens, const Vec& b,
                                     const SolveOptions& opts) {
  if (b.size() != ens.m()) throw DimensionError("solve: b has wrong length");
  if (opts.rank < 1) throw InvalidInputError("coordinate descent: rank must be >= 1");
  if (opts.block < 1 || opts.block > ens.m() - 1)
    throw InvalidInputError("coordinate descent: need 1 <= block <= m-1");

  GradientLoop loop(ens, opts);
  const Stopwatch watch(opts.record_timings);
  const NullBasis basis = NullBasis::sparse(b);
  const PruneRule rule = opts.gauge == Gauge::TracePsd ? PruneRule::LargestAlgebraic
                                                       : PruneRule::LargestMagnitude;
  const int pivot = basis.pivot();

  Vec z = Vec::Zero(basis.cols());
  Vec y = basis.anchor();
  LowRankFactor factor = refresh_factor(ens, y, opts.rank, rule);
  if (opts.on_iterate) opts.on_iterate(0, y);

  auto approx_objective = [&]() {
    return gauge_value(opts.gauge, factor.D[factor.leading_index(rule)]);
  };

  SolveResult out;
  out.trajectory.reserve(opts.iters + 1);
  {
    double exact0 = kNaN;
    if (opts.exact_objective_every > 0) exact0 = loop.exact_objective(y);
    out.trajectory.push_back({0, approx_objective(), exact0, kNaN, watch.seconds()});
  }

  for (int k = 0; k < opts.iters; ++k) {
    // Refresh triggers: scheduled rebuild, degenerate factor, or a leading
    // eigenpair that drifted too far from the true A*(y).
    bool refresh = factor.rank() == 0 || !factor.D.allFinite() || !factor.U.allFinite();
    if (!refresh && opts.refresh_every > 0 && k > 0 && k % opts.refresh_every == 0)
      refresh = true;
    if (!refresh && opts.residual_check_every > 0 && k > 0 &&
        k % opts.residual_check_every == 0) {
      const int lead = factor.leading_index(rule);
      const Vec u = factor.U.col(lead);
      const double lambda = factor.D[lead];
      const double resid = (adjoint_matvec(ens, y, u) - lambda * u).norm();
      if (resid > opts.refresh_residual_tol * std::max(1.0, std::abs(lambda))) refresh = true;
    }
    if (refresh) factor = refresh_factor(ens, y, opts.rank, rule);

    const std::vector<int> zsel =
        sample_coordinates(basis, y, opts.gauge, opts.block, opts.scheme, loop.rng);

    // Rows touched by the selected columns (at most 2L by sparsity).
    std::vector<int> rows;
    rows.reserve(zsel.size() + 1);
    bool pivot_touched = false;
    for (int j : zsel) {
      rows.push_back(basis.column_row(j));
      if (basis.column_ratio(j) != 0.0) pivot_touched = true;
    }
    if (pivot_touched) rows.push_back(pivot);
    std::sort(rows.begin(), rows.end());

    const int lead = factor.leading_index(rule);
    const Vec u = factor.U.col(lead);
    const double sign = (opts.gauge == Gauge::Nuclear && factor.D[lead] < 0.0) ? -1.0 : 1.0;

    // Partial gradient on the touched rows only.
    double g_pivot = 0.0;
    std::vector<double> g_row(zsel.size());
    if (pivot_touched) {
      const double d = ens.row(pivot).dot(u);
      g_pivot = sign * d * d;
    }
    for (std::size_t t = 0; t < zsel.size(); ++t) {
      const double d = ens.row(basis.column_row(zsel[t])).dot(u);
      g_row[t] = sign * d * d;
    }

    Vec ghat(static_cast<Eigen::Index>(zsel.size()));
    for (std::size_t t = 0; t < zsel.size(); ++t)
      ghat[static_cast<Eigen::Index>(t)] =
          g_row[t] - basis.column_ratio(zsel[t]) * g_pivot;

    double t_step;
    if (opts.step.kind == StepPolicy::Kind::Backtracking) {
      const double f0 = loop.exact_objective(y);
      t_step = backtracking_step(opts.step, f0, ghat.squaredNorm(), [&](double tt) {
        Vec ytrial = y;
        double pivot_delta = 0.0;
        for (std::size_t t = 0; t < zsel.size(); ++t) {
          ytrial[basis.column_row(zsel[t])] -= tt * ghat[static_cast<Eigen::Index>(t)];
          pivot_delta += basis.column_ratio(zsel[t]) * ghat[static_cast<Eigen::Index>(t)];
        }
        ytrial[pivot] += tt * pivot_delta;
        return loop.exact_objective(ytrial);
      });
    } else {
      t_step = step_size(opts.step, k);
    }

    // z and y move together: delta_y = B * (-t ghat), supported on `rows`.
    Vec delta_y = Vec::Zero(ens.m());
    double pivot_delta = 0.0;
    for (std::size_t t = 0; t < zsel.size(); ++t) {
      const int j = zsel[t];
      const double gj = ghat[static_cast<Eigen::Index>(t)];
      z[j] -= t_step * gj;
      delta_y[basis.column_row(j)] = -t_step * gj;
      pivot_delta += basis.column_ratio(j) * gj;
    }
    if (pivot_touched) delta_y[pivot] = t_step * pivot_delta;
    y += delta_y;

    Mat A_I(ens.n(), static_cast<Eigen::Index>(rows.size()));
    Vec dy(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t t = 0; t < rows.size(); ++t) {
      A_I.col(static_cast<Eigen::Index>(t)) = ens.row(rows[t]);
      dy[static_cast<Eigen::Index>(t)] = delta_y[rows[t]];
    }
    factor = lowrank_update(factor, A_I, dy, opts.rank, rule);

    double exact = kNaN;
    if (opts.exact_objective_every > 0 && (k + 1) % opts.exact_objective_every == 0)
      exact = loop.exact_objective(y);
    const double approx = approx_objective();
    if (std::isnan(approx)) throw NumericalError("coordinate descent: objective became NaN");
    out.trajectory.push_back({k + 1, approx, exact, t_step, watch.seconds()});
    if (opts.on_iterate) opts.on_iterate(k + 1, y);
  }

  auto [f_end, eig_end] = dual_objective(ens, y, opts.gauge, loop.objective_opts());
  if (!out.trajectory.empty()) out.trajectory.back().exact_objective = f_end;
  out.state = DualState{std::move(y), std::move(z), std::move(eig_end), f_end, opts.iters};
  out.factor = std::move(factor);
  return out;
}

} // namespace gpr
