#include "gpr/dual.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gpr/errors.hpp"
#include "gpr/kernels.hpp"

namespace gpr {

std::string to_string(Gauge g) { return g == Gauge::TracePsd ? "psd" : "nuclear"; }

Gauge gauge_from_string(const std::string& s) {
  if (s == "psd" || s == "trace_psd" || s == "trace+psd") return Gauge::TracePsd;
  if (s == "nuclear") return Gauge::Nuclear;
  throw InvalidInputError("unknown gauge: " + s);
}

std::string to_string(const SamplingRegime& r) {
  switch (r.kind) {
    case RegimeKind::Full: return "full";
    case RegimeKind::NonnegativeSupport: return "nonneg";
    case RegimeKind::WeightedRandom:
      return "weighted:" + std::to_string(r.sample_size);
  }
  return "full";
}

SamplingRegime regime_from_string(const std::string& s, int sample_size) {
  if (s == "full") return {RegimeKind::Full, 0};
  if (s == "nonneg" || s == "nonnegative") return {RegimeKind::NonnegativeSupport, 0};
  if (s == "weighted") return {RegimeKind::WeightedRandom, sample_size};
  throw InvalidInputError("unknown sampling regime: " + s);
}

double gauge_weight(Gauge g, double yi) {
  return g == Gauge::TracePsd ? std::max(yi, 0.0) : std::abs(yi);
}

std::pair<double, EigResult> dual_objective(const MeasurementEnsemble& ens, const Vec& y,
                                            Gauge gauge, const PowerOpts& opts) {
  const AdjointOperator op(ens, y);
  const LinearOp lin = as_linear_op(op);
  if (gauge == Gauge::TracePsd) {
    EigResult eig = evec_max_algebraic(lin, opts);
    return {std::max(eig.value, 0.0), std::move(eig)};
  }
  EigResult eig = evec_max_magnitude(lin, opts);
  return {std::abs(eig.value), std::move(eig)};
}

namespace {

std::vector<int> regime_subset(const Vec& y, Gauge gauge, const SamplingRegime& regime,
                               Rng& rng) {
  const int m = static_cast<int>(y.size());
  switch (regime.kind) {
    case RegimeKind::Full:
      return {};
    case RegimeKind::NonnegativeSupport: {
      std::vector<int> idx;
      for (int i = 0; i < m; ++i)
        if (y[i] >= 0.0) idx.push_back(i);
      if (idx.empty())
        throw EmptySupportError("dual_gradient: {i : y_i >= 0} is empty");
      return idx;
    }
    case RegimeKind::WeightedRandom: {
      const int s = regime.sample_size > 0 ? regime.sample_size : std::max(1, m / 10);
      Vec w(m);
      for (int i = 0; i < m; ++i) w[i] = gauge_weight(gauge, y[i]);
      if (w.sum() <= 0.0)
        throw ZeroWeightError("dual_gradient: all sampling weights are zero");
      auto idx = weighted_sample_without_replacement(w, std::min(s, m), rng);
      std::sort(idx.begin(), idx.end());
      return idx;
    }
  }
  return {};
}

} // namespace

GradientResult dual_gradient(const MeasurementEnsemble& ens, const Vec& y, Gauge gauge,
                             const SamplingRegime& regime, const PowerOpts& opts, Rng& rng) {
  if (y.size() != ens.m()) throw DimensionError("dual_gradient: y has wrong length");

  GradientResult out;
  out.subset = regime_subset(y, gauge, regime, rng);

  PowerOpts eig_opts = opts;
  eig_opts.seed = derive_seed(opts.seed, "gradient-eig", rng.raw());

  if (out.subset.empty()) { // full regime
    const AdjointOperator op(ens, y);
    const LinearOp lin = as_linear_op(op);
    out.eig = gauge == Gauge::TracePsd ? evec_max_algebraic(lin, eig_opts)
                                       : evec_max_magnitude(lin, eig_opts);
  } else {
    const AdjointOperator op(ens, y, out.subset);
    const LinearOp lin = as_linear_op(op);
    out.eig = gauge == Gauge::TracePsd ? evec_max_algebraic(lin, eig_opts)
                                       : evec_max_magnitude(lin, eig_opts);
  }

  // The subset only shapes the eigenvector estimate; the gradient itself
  // covers all m coordinates.
  kernels::forward_rank1(ens.vectors(), out.eig.vector, out.g);
  if (gauge == Gauge::Nuclear && out.eig.value < 0.0) out.g = -out.g;
  return out;
}

Vec project_hyperplane(const Vec& s, const Vec& b) {
  if (s.size() != b.size()) throw DimensionError("project_hyperplane: length mismatch");
  const double bb = b.squaredNorm();
  if (bb == 0.0) throw InvalidInputError("project_hyperplane: b is zero");
  return s - b * (b.dot(s) / bb) + b / bb;
}

NullBasis NullBasis::dense(const Vec& b) {
  const int m = static_cast<int>(b.size());
  if (m < 2) throw InvalidInputError("null basis: need m >= 2");
  const double bb = b.squaredNorm();
  if (bb == 0.0) throw InvalidInputError("null basis: b is zero");

  // Full QR of the m-by-1 matrix b: the trailing m-1 columns of Q span
  // null(b^T) and are orthonormal.
  Eigen::HouseholderQR<Mat> qr(b);
  Mat Q = qr.householderQ() * Mat::Identity(m, m);

  NullBasis out;
  out.kind_ = Kind::DenseOrthonormal;
  out.m_ = m;
  out.dense_ = Q.rightCols(m - 1);
  out.anchor_ = b / bb;
  return out;
}

NullBasis NullBasis::sparse(const Vec& b) {
  const int m = static_cast<int>(b.size());
  if (m < 2) throw InvalidInputError("null basis: need m >= 2");
  int piv = 0;
  for (int i = 1; i < m; ++i)
    if (b[i] > b[piv]) piv = i;
  if (!(b[piv] > 0.0))
    throw InvalidInputError("sparse null basis: max(b) must be strictly positive");

  NullBasis out;
  out.kind_ = Kind::SparseNearIdentity;
  out.m_ = m;
  out.pivot_ = piv;
  out.row_.reserve(m - 1);
  out.ratio_.resize(m - 1);
  int j = 0;
  for (int i = 0; i < m; ++i) {
    if (i == piv) continue;
    out.row_.push_back(i);
    out.ratio_[j++] = b[i] / b[piv];
  }
  out.anchor_ = Vec::Zero(m);
  out.anchor_[piv] = 1.0 / b[piv];
  return out;
}

Vec NullBasis::apply(const Vec& z) const {
  if (z.size() != cols()) throw DimensionError("null basis: z has wrong length");
  if (kind_ == Kind::DenseOrthonormal) return dense_ * z;
  Vec y = Vec::Zero(m_);
  double pivot_sum = 0.0;
  for (int j = 0; j < cols(); ++j) {
    y[row_[j]] += z[j];
    pivot_sum += ratio_[j] * z[j];
  }
  y[pivot_] -= pivot_sum;
  return y;
}

Vec NullBasis::apply_transpose(const Vec& g) const {
  if (g.size() != m_) throw DimensionError("null basis: g has wrong length");
  if (kind_ == Kind::DenseOrthonormal) return dense_.transpose() * g;
  Vec out(cols());
  for (int j = 0; j < cols(); ++j) out[j] = g[row_[j]] - ratio_[j] * g[pivot_];
  return out;
}

int NullBasis::pivot() const {
  if (kind_ != Kind::SparseNearIdentity) throw InvalidInputError("null basis: not sparse");
  return pivot_;
}

int NullBasis::column_row(int j) const {
  if (kind_ != Kind::SparseNearIdentity) throw InvalidInputError("null basis: not sparse");
  return row_.at(static_cast<std::size_t>(j));
}

double NullBasis::column_ratio(int j) const {
  if (kind_ != Kind::SparseNearIdentity) throw InvalidInputError("null basis: not sparse");
  return ratio_[j];
}

Mat NullBasis::materialize() const {
  if (kind_ == Kind::DenseOrthonormal) return dense_;
  Mat B = Mat::Zero(m_, cols());
  for (int j = 0; j < cols(); ++j) {
    B(row_[j], j) = 1.0;
    B(pivot_, j) = -ratio_[j];
  }
  return B;
}

std::string to_string(CoordScheme s) { return s == CoordScheme::Uniform ? "uniform" : "weighted"; }

CoordScheme scheme_from_string(const std::string& s) {
  if (s == "uniform") return CoordScheme::Uniform;
  if (s == "weighted") return CoordScheme::Weighted;
  throw InvalidInputError("unknown coordinate scheme: " + s);
}

std::vector<int> sample_coordinates(const NullBasis& basis, const Vec& y, Gauge gauge, int L,
                                    CoordScheme scheme, Rng& rng, bool* fell_back) {
  const int cols = basis.cols();
  if (L < 1 || L > cols) throw InvalidInputError("sample_coordinates: need 1 <= L <= m-1");
  if (fell_back) *fell_back = false;

  if (scheme == CoordScheme::Weighted) {
    Vec w(cols);
    for (int j = 0; j < cols; ++j) w[j] = gauge_weight(gauge, y[basis.column_row(j)]);
    if (w.sum() > 0.0) {
      // Draw as many weighted picks as the support allows, then fill any
      // remainder uniformly from the untouched coordinates.
      auto idx = weighted_sample_without_replacement(w, L, rng);
      if (static_cast<int>(idx.size()) < L) {
        std::vector<bool> used(cols, false);
        for (int j : idx) used[j] = true;
        std::vector<int> rest;
        for (int j = 0; j < cols; ++j)
          if (!used[j]) rest.push_back(j);
        auto extra =
            sample_without_replacement(static_cast<int>(rest.size()),
                                       L - static_cast<int>(idx.size()), rng);
        for (int e : extra) idx.push_back(rest[e]);
      }
      std::sort(idx.begin(), idx.end());
      return idx;
    }
    if (fell_back) *fell_back = true;
  }

  auto idx = sample_without_replacement(cols, L, rng);
  std::sort(idx.begin(), idx.end());
  return idx;
}

StepPolicy StepPolicy::fixed(double t) {
  if (!(t > 0.0)) throw InvalidInputError("step policy: t0 must be positive");
  StepPolicy p;
  p.kind = Kind::Fixed;
  p.t0 = t;
  return p;
}

StepPolicy StepPolicy::decay(double t0, double tau) {
  if (!(t0 > 0.0) || !(tau > 0.0))
    throw InvalidInputError("step policy: t0 and tau must be positive");
  StepPolicy p;
  p.kind = Kind::Decay;
  p.t0 = t0;
  p.tau = tau;
  return p;
}

StepPolicy StepPolicy::backtracking(double beta, double c, double t_init) {
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidInputError("step policy: beta in (0,1)");
  if (!(c > 0.0 && c < 1.0)) throw InvalidInputError("step policy: c in (0,1)");
  if (!(t_init > 0.0)) throw InvalidInputError("step policy: t_init must be positive");
  StepPolicy p;
  p.kind = Kind::Backtracking;
  p.beta = beta;
  p.c = c;
  p.t_init = t_init;
  return p;
}

StepPolicy StepPolicy::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) throw InvalidInputError("step policy: empty spec");
  try {
    if (parts[0] == "fixed" && parts.size() == 2) return fixed(std::stod(parts[1]));
    if (parts[0] == "decay" && parts.size() == 3)
      return decay(std::stod(parts[1]), std::stod(parts[2]));
    if (parts[0] == "backtrack" || parts[0] == "backtracking") {
      StepPolicy p = backtracking();
      if (parts.size() > 1) p.beta = std::stod(parts[1]);
      if (parts.size() > 2) p.c = std::stod(parts[2]);
      if (parts.size() > 3) p.t_init = std::stod(parts[3]);
      return backtracking(p.beta, p.c, p.t_init);
    }
  } catch (const std::invalid_argument&) {
    throw InvalidInputError("step policy: bad number in \"" + text + "\"");
  }
  throw InvalidInputError("step policy: cannot parse \"" + text + "\"");
}

std::string StepPolicy::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Fixed: os << "fixed:" << t0; break;
    case Kind::Decay: os << "decay:" << t0 << ":" << tau; break;
    case Kind::Backtracking: os << "backtrack:" << beta << ":" << c << ":" << t_init; break;
  }
  return os.str();
}

double step_size(const StepPolicy& policy, int k) {
  switch (policy.kind) {
    case StepPolicy::Kind::Fixed: return policy.t0;
    case StepPolicy::Kind::Decay: return policy.t0 / (1.0 + static_cast<double>(k) / policy.tau);
    case StepPolicy::Kind::Backtracking:
      throw InvalidInputError("step_size: backtracking needs an objective context");
  }
  return policy.t0;
}

double backtracking_step(const StepPolicy& policy, double f0, double grad_norm_sq,
                         const std::function<double(double)>& objective_at_step, bool* warned) {
  if (warned) *warned = false;
  double t = policy.t_init;
  for (int j = 0; j < 50; ++j) {
    if (objective_at_step(t) <= f0 - policy.c * t * grad_norm_sq) return t;
    t *= policy.beta;
  }
  if (warned) *warned = true;
  return t;
}

} // namespace gpr
