#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpr/operators.hpp"
#include "gpr/rng.hpp"
#include "gpr/spectral.hpp"
#include "gpr/types.hpp"

namespace gpr {

// Gauge pair selection. trace_psd: kappa = tr + PSD indicator, polar
// objective max{lambda_max, 0}, algebraic eigensolver. nuclear: kappa =
// nuclear norm, polar objective ||.||_2, magnitude eigensolver.
enum class Gauge { TracePsd, Nuclear };

std::string to_string(Gauge g);
Gauge gauge_from_string(const std::string& s);

// How the dual-matrix estimate W-hat is assembled for gradient work.
enum class RegimeKind { Full, NonnegativeSupport, WeightedRandom };

struct SamplingRegime {
  RegimeKind kind = RegimeKind::Full;
  int sample_size = 0; // WeightedRandom subset size; 0 means m/10
};

std::string to_string(const SamplingRegime& r);
SamplingRegime regime_from_string(const std::string& s, int sample_size = 0);

// Gauge-specific sampling weight of a dual coordinate: max(y_i, 0) for the
// PSD gauge, |y_i| for the nuclear gauge.
double gauge_weight(Gauge g, double yi);

// f(y) = kappa_polar(A*(y)). Returns the value together with the eigenpair
// it came from so callers can reuse it for the gradient.
std::pair<double, EigResult> dual_objective(const MeasurementEnsemble& ens, const Vec& y,
                                            Gauge gauge, const PowerOpts& opts = {});

struct GradientResult {
  Vec g;              // length m; sampling approximates the eigenvector, not g's support
  EigResult eig;      // extreme eigenpair of the (possibly subsampled) estimate
  std::vector<int> subset; // rows used to build the estimate (empty = full)
};

// Gradient of the polar objective at y: g_i = (a_i . u)^2, where u is the
// extreme eigenvector of the regime's estimate of A*(y); under the nuclear
// gauge the entries are signed by the dominant eigenvalue.
GradientResult dual_gradient(const MeasurementEnsemble& ens, const Vec& y, Gauge gauge,
                             const SamplingRegime& regime, const PowerOpts& opts, Rng& rng);

// Euclidean projection onto {y : <y,b> = 1}.
Vec project_hyperplane(const Vec& s, const Vec& b);

// Basis of null(b^T) plus an anchor with <anchor, b> = 1, so that
// y = B z + anchor is always feasible.
class NullBasis {
public:
  enum class Kind { DenseOrthonormal, SparseNearIdentity };

  // Orthonormal basis from a full Householder QR of b; anchor b / <b,b>.
  static NullBasis dense(const Vec& b);

  // Near-identity sparse basis: pivot i* = argmax b_i (ties to the lowest
  // index), column j = e_row(j) - (b_row(j)/b_i*) e_i*, anchor e_i*/b_i*.
  // Applying B or B^T costs O(m).
  static NullBasis sparse(const Vec& b);

  Kind kind() const { return kind_; }
  int rows() const { return m_; }
  int cols() const { return m_ - 1; }
  const Vec& anchor() const { return anchor_; }

  Vec apply(const Vec& z) const;            // B z   (length m)
  Vec apply_transpose(const Vec& g) const;  // B^T g (length m-1)

  // Sparse-only accessors.
  int pivot() const;
  int column_row(int j) const;   // the non-pivot row of column j
  double column_ratio(int j) const; // b_row(j) / b_pivot

  Mat materialize() const; // dense m-by-(m-1) copy of B (tests, small m)

private:
  NullBasis() = default;
  Kind kind_ = Kind::DenseOrthonormal;
  int m_ = 0;
  Vec anchor_;
  Mat dense_;            // dense variant
  int pivot_ = -1;       // sparse variant
  std::vector<int> row_; // sparse variant: column j -> non-pivot row
  Vec ratio_;            // sparse variant: b_row(j) / b_pivot
};

// Coordinate selection for the block method.
enum class CoordScheme { Uniform, Weighted };

std::string to_string(CoordScheme s);
CoordScheme scheme_from_string(const std::string& s);

// L distinct z-coordinates in {0..m-2}. The weighted scheme draws without
// replacement with probability proportional to the gauge weight of each
// coordinate's non-pivot row; if every weight is zero it falls back to
// uniform and reports that through *fell_back.
std::vector<int> sample_coordinates(const NullBasis& basis, const Vec& y, Gauge gauge, int L,
                                    CoordScheme scheme, Rng& rng, bool* fell_back = nullptr);

// Step-size policies. Backtracking needs an objective callback and is
// resolved through backtracking_step.
struct StepPolicy {
  enum class Kind { Fixed, Decay, Backtracking };
  Kind kind = Kind::Fixed;
  double t0 = 0.1;    // fixed step, or decay numerator
  double tau = 100.0; // decay: t0 / (1 + k/tau)
  double beta = 0.5;  // backtracking shrink factor
  double c = 1e-4;    // Armijo constant
  double t_init = 1.0;

  static StepPolicy fixed(double t);
  static StepPolicy decay(double t0, double tau);
  static StepPolicy backtracking(double beta = 0.5, double c = 1e-4, double t_init = 1.0);

  // Parses "fixed:0.1", "decay:1:100", "backtrack[:beta[:c[:t_init]]]".
  static StepPolicy parse(const std::string& text);
  std::string describe() const;
};

// Step for iteration k under a fixed or decay policy (throws for
// backtracking, which needs the objective context below).
double step_size(const StepPolicy& policy, int k);

// Armijo line search: largest t in {t_init * beta^j, j <= 50} with
// f(t) <= f0 - c * t * grad_norm_sq. When 50 shrinks never satisfy the
// test, returns the last t and sets *warned.
double backtracking_step(const StepPolicy& policy, double f0, double grad_norm_sq,
                         const std::function<double(double)>& objective_at_step,
                         bool* warned = nullptr);

} // namespace gpr
