#pragma once

// Finite-outcome observables: validation, Born statistics, marginals,
// stochastic smearing and its inverse, image observables, range analysis,
// the product joint observable of commuting POVMs and the Lüders update.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coexkit/linalg.hpp"

namespace coexkit {

namespace tol {
inline constexpr double completeness = 1e-10;
inline constexpr double stochastic = 1e-12;
inline constexpr double effect_equality = 1e-9;
inline constexpr double product_commutator = 1e-10;
inline constexpr double singular_det = 1e-12;
inline constexpr double luders_probability = 1e-14;
}  // namespace tol

inline constexpr std::size_t max_range_outcomes = 16;

/// Names the first violated POVM invariant, or nothing when valid.
inline std::optional<std::string> povm_violation(const std::vector<HermitianMatrix>& effects,
                                                 double effect_tol = tol::effect,
                                                 double sum_tol = tol::completeness) {
  if (effects.empty()) return "no outcomes";
  const std::size_t d = effects.front().dim();
  Matrix sum(d);
  for (std::size_t i = 0; i < effects.size(); ++i) {
    if (effects[i].dim() != d) return "effect " + std::to_string(i) + " has mismatched dimension";
    const auto ev = eigenvalues(effects[i]);
    if (ev.front() < -effect_tol) return "effect " + std::to_string(i) + " is not positive";
    if (ev.back() > 1.0 + effect_tol) return "effect " + std::to_string(i) + " exceeds identity";
    sum += effects[i].matrix();
  }
  const Matrix id = Matrix::identity(d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c)
      if (std::abs(sum(r, c) - id(r, c)) > sum_tol) return std::string("sum != I");
  return std::nullopt;
}

/// Finite-outcome POVM. Labels are unique outcome identifiers.
class DiscretePOVM {
 public:
  DiscretePOVM(std::vector<std::string> labels, std::vector<HermitianMatrix> effects,
               double effect_tol = tol::effect)
      : labels_(std::move(labels)), effects_(std::move(effects)) {
    if (labels_.size() != effects_.size()) throw std::invalid_argument("DiscretePOVM: label/effect count mismatch");
    for (std::size_t i = 0; i < labels_.size(); ++i)
      for (std::size_t j = i + 1; j < labels_.size(); ++j)
        if (labels_[i] == labels_[j]) throw std::invalid_argument("DiscretePOVM: duplicate label '" + labels_[i] + "'");
    if (auto v = povm_violation(effects_, effect_tol)) throw std::invalid_argument("DiscretePOVM: " + *v);
  }

  /// Labels "0", "1", ... .
  explicit DiscretePOVM(std::vector<HermitianMatrix> effects) : DiscretePOVM(index_labels(effects.size()), effects) {}

  std::size_t size() const noexcept { return effects_.size(); }
  std::size_t dim() const noexcept { return effects_.front().dim(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<HermitianMatrix>& effects() const noexcept { return effects_; }
  const HermitianMatrix& operator[](std::size_t i) const { return effects_.at(i); }

  std::size_t index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw std::out_of_range("DiscretePOVM: unknown label '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
  }

  static std::vector<std::string> index_labels(std::size_t n) {
    std::vector<std::string> l(n);
    for (std::size_t i = 0; i < n; ++i) l[i] = std::to_string(i);
    return l;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<HermitianMatrix> effects_;
};

/// Sharp binary POVM {P+, P-} of the spin component along n.
inline DiscretePOVM sharp_spin(const Vec3& n) {
  return DiscretePOVM({"+", "-"}, {spin_projection(n, +1), spin_projection(n, -1)});
}

/// Binary POVM {A, I - A}.
inline DiscretePOVM binary_povm(const HermitianMatrix& a) {
  return DiscretePOVM({"+", "-"}, {a, HermitianMatrix::identity(a.dim()) - a});
}

/// Observable on a product outcome set; effects(r, c).
class JointPOVM {
 public:
  JointPOVM(std::vector<std::string> row_labels, std::vector<std::string> col_labels,
            std::vector<std::vector<HermitianMatrix>> effects, double effect_tol = tol::effect)
      : rows_(std::move(row_labels)), cols_(std::move(col_labels)), effects_(std::move(effects)), tol_(effect_tol) {
    if (effects_.size() != rows_.size()) throw std::invalid_argument("JointPOVM: row count mismatch");
    for (const auto& row : effects_)
      if (row.size() != cols_.size()) throw std::invalid_argument("JointPOVM: column count mismatch");
    (void)flatten();
  }

  const std::vector<std::string>& row_labels() const noexcept { return rows_; }
  const std::vector<std::string>& col_labels() const noexcept { return cols_; }
  const HermitianMatrix& operator()(std::size_t r, std::size_t c) const { return effects_.at(r).at(c); }
  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_.size(); }
  std::size_t dim() const { return effects_.front().front().dim(); }

  /// Effect tolerance the joint observable was validated with.
  double effect_tolerance() const noexcept { return tol_; }

  /// Row-major flattening, labels "r,c".
  DiscretePOVM flatten() const {
    std::vector<std::string> labels;
    std::vector<HermitianMatrix> eff;
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (std::size_t c = 0; c < cols_.size(); ++c) {
        labels.push_back(rows_[r] + "," + cols_[c]);
        eff.push_back(effects_[r][c]);
      }
    return DiscretePOVM(std::move(labels), std::move(eff), tol_);
  }

 private:
  std::vector<std::string> rows_, cols_;
  std::vector<std::vector<HermitianMatrix>> effects_;
  double tol_;
};

/// Column-stochastic m x n matrix: entry(j, k) >= 0 and sum_j entry(j, k) = 1,
/// mapping n sharp outcomes k to m smeared outcomes j.
class StochasticMatrix {
 public:
  StochasticMatrix(std::size_t rows, std::size_t cols, std::vector<std::vector<double>> entries)
      : rows_(rows), cols_(cols), e_(std::move(entries)) {
    if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("StochasticMatrix: empty");
    if (e_.size() != rows_) throw std::invalid_argument("StochasticMatrix: row count mismatch");
    for (const auto& row : e_)
      if (row.size() != cols_) throw std::invalid_argument("StochasticMatrix: column count mismatch");
    for (std::size_t k = 0; k < cols_; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < rows_; ++j) {
        if (e_[j][k] < 0.0) throw std::invalid_argument("StochasticMatrix: negative entry");
        s += e_[j][k];
      }
      if (std::abs(s - 1.0) > tol::stochastic)
        throw std::invalid_argument("StochasticMatrix: column " + std::to_string(k) + " does not sum to 1");
    }
  }

  explicit StochasticMatrix(std::vector<std::vector<double>> entries)
      : StochasticMatrix(entries.size(), entries.empty() ? 0 : entries.front().size(), entries) {}

  static StochasticMatrix identity(std::size_t n) {
    std::vector<std::vector<double>> e(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) e[i][i] = 1.0;
    return StochasticMatrix(n, n, std::move(e));
  }

  /// Symmetric binary noise: [[½(1+c), ½(1-c)], [½(1-c), ½(1+c)]], |c| <= 1.
  static StochasticMatrix binary_symmetric(double c) {
    return StochasticMatrix(2, 2, {{0.5 * (1 + c), 0.5 * (1 - c)}, {0.5 * (1 - c), 0.5 * (1 + c)}});
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t j, std::size_t k) const { return e_.at(j).at(k); }
  const std::vector<std::vector<double>>& entries() const noexcept { return e_; }

 private:
  std::size_t rows_, cols_;
  std::vector<std::vector<double>> e_;
};

/// Total map from source outcome labels to target labels.
class OutcomeMap {
 public:
  OutcomeMap() = default;
  explicit OutcomeMap(std::map<std::string, std::string> m) : m_(std::move(m)) {}

  template <class F>
  static OutcomeMap from_function(const std::vector<std::string>& sources, F&& f) {
    std::map<std::string, std::string> m;
    for (const auto& s : sources) m[s] = f(s);
    return OutcomeMap(std::move(m));
  }

  const std::string& operator()(const std::string& source) const {
    auto it = m_.find(source);
    if (it == m_.end()) throw std::invalid_argument("OutcomeMap: no image for label '" + source + "'");
    return it->second;
  }
  bool defines(const std::string& source) const { return m_.count(source) > 0; }

 private:
  std::map<std::string, std::string> m_;
};

// ---- statistics -------------------------------------------------------------

inline std::vector<double> born(const DensityState& rho, const DiscretePOVM& e) {
  if (rho.dim() != e.dim()) throw std::invalid_argument("born: dimension mismatch");
  std::vector<double> p;
  p.reserve(e.size());
  for (const auto& eff : e.effects()) p.push_back((rho.matrix().matrix() * eff.matrix()).trace().real());
  return p;
}

inline std::pair<DiscretePOVM, DiscretePOVM> marginals(const JointPOVM& f) {
  const std::size_t d = f.dim();
  std::vector<HermitianMatrix> first, second;
  for (std::size_t r = 0; r < f.rows(); ++r) {
    HermitianMatrix s = HermitianMatrix::zero(d);
    for (std::size_t c = 0; c < f.cols(); ++c) s = s + f(r, c);
    first.push_back(s);
  }
  for (std::size_t c = 0; c < f.cols(); ++c) {
    HermitianMatrix s = HermitianMatrix::zero(d);
    for (std::size_t r = 0; r < f.rows(); ++r) s = s + f(r, c);
    second.push_back(s);
  }
  return {DiscretePOVM(f.row_labels(), std::move(first)), DiscretePOVM(f.col_labels(), std::move(second))};
}

// ---- smearing ---------------------------------------------------------------

/// E_j = sum_k lambda(j,k) P_k. Output labels "0".."m-1".
inline DiscretePOVM smear(const DiscretePOVM& p, const StochasticMatrix& lambda) {
  if (lambda.cols() != p.size()) throw std::invalid_argument("smear: stochastic matrix has wrong column count");
  std::vector<HermitianMatrix> out;
  for (std::size_t j = 0; j < lambda.rows(); ++j) {
    HermitianMatrix e = HermitianMatrix::zero(p.dim());
    for (std::size_t k = 0; k < p.size(); ++k) e = e + lambda(j, k) * p[k];
    out.push_back(e);
  }
  if (lambda.rows() == p.size()) return DiscretePOVM(p.labels(), std::move(out));
  return DiscretePOVM(std::move(out));
}

struct Unsmearing {
  std::vector<HermitianMatrix> operators;      // sum_j mu(k,j) E_j
  std::vector<std::vector<double>> mu;         // inverse of lambda
  double condition_number = 0.0;               // 1-norm
};

namespace detail {

inline std::vector<std::vector<double>> invert(const std::vector<std::vector<double>>& a, double& det) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> m = a, inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      std::swap(inv[piv], inv[col]);
      det = -det;
    }
    const double p = m[col][col];
    det *= p;
    if (p == 0.0) return {};
    for (std::size_t j = 0; j < n; ++j) {
      m[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0.0) continue;
      const double f = m[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        m[r][j] -= f * m[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

inline double norm1(const std::vector<std::vector<double>>& a) {
  double best = 0.0;
  for (std::size_t k = 0; k < a.front().size(); ++k) {
    double s = 0.0;
    for (const auto& row : a) s += std::abs(row[k]);
    best = std::max(best, s);
  }
  return best;
}

}  // namespace detail

/// Recovers the sharp operators P_k = sum_j mu(k,j) E_j with mu = lambda^{-1}.
/// The results are plain operators; they are effects only when E really is a
/// smearing of a sharp observable by lambda.
inline Unsmearing unsmear(const DiscretePOVM& e, const StochasticMatrix& lambda) {
  if (lambda.rows() != lambda.cols()) throw std::invalid_argument("unsmear: stochastic matrix must be square");
  if (lambda.rows() != e.size()) throw std::invalid_argument("unsmear: stochastic matrix does not match outcome count");
  double det = 0.0;
  auto mu = detail::invert(lambda.entries(), det);
  if (mu.empty() || std::abs(det) < tol::singular_det)
    throw std::domain_error("unsmear: stochastic matrix is singular (|det| = " + std::to_string(std::abs(det)) + ")");
  Unsmearing out;
  const std::size_t n = e.size();
  for (std::size_t k = 0; k < n; ++k) {
    HermitianMatrix p = HermitianMatrix::zero(e.dim());
    for (std::size_t j = 0; j < n; ++j) p = p + mu[k][j] * e[j];
    out.operators.push_back(p);
  }
  out.condition_number = detail::norm1(lambda.entries()) * detail::norm1(mu);
  out.mu = std::move(mu);
  return out;
}

// ---- image observables and ranges -------------------------------------------

/// E^f(y) = sum_{f(x) = y} E(x); targets ordered by first appearance.
inline DiscretePOVM image(const DiscretePOVM& e, const OutcomeMap& f) {
  std::vector<std::string> targets;
  std::vector<HermitianMatrix> eff;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const std::string& y = f(e.labels()[i]);
    auto it = std::find(targets.begin(), targets.end(), y);
    if (it == targets.end()) {
      targets.push_back(y);
      eff.push_back(e[i]);
    } else {
      auto& slot = eff[static_cast<std::size_t>(it - targets.begin())];
      slot = slot + e[i];
    }
  }
  return DiscretePOVM(std::move(targets), std::move(eff));
}

/// Subset X of outcomes as a bitmask, bit i = outcome i.
using OutcomeSubset = std::uint32_t;

struct RangeEntry {
  OutcomeSubset subset;
  HermitianMatrix effect;
};

/// All 2^n subset sums E(X), including O (empty set) and I (everything).
inline std::vector<RangeEntry> range_effects(const DiscretePOVM& e) {
  if (e.size() > max_range_outcomes)
    throw std::invalid_argument("range_effects: at most " + std::to_string(max_range_outcomes) + " outcomes");
  const std::size_t n = e.size();
  const OutcomeSubset count = OutcomeSubset{1} << n;
  std::vector<RangeEntry> out;
  out.reserve(count);
  out.push_back({0, HermitianMatrix::zero(e.dim())});
  // Gray-code-free build: E(X) = E(X without lowest bit) + E_lowest.
  for (OutcomeSubset x = 1; x < count; ++x) {
    const OutcomeSubset low = x & (~x + 1);
    const auto bit = static_cast<std::size_t>(std::countr_zero(low));
    out.push_back({x, out[x ^ low].effect + e[bit]});
  }
  return out;
}

/// No range effect other than O, I lies below or above ½I.
inline bool is_regular(const DiscretePOVM& e) {
  const auto range = range_effects(e);
  const auto zero = HermitianMatrix::zero(e.dim());
  const auto id = HermitianMatrix::identity(e.dim());
  for (const auto& r : range) {
    if (frobenius_distance(r.effect, zero) < tol::effect_equality ||
        frobenius_distance(r.effect, id) < tol::effect_equality)
      continue;
    const auto ev = eigenvalues(r.effect);
    if (!(ev.back() > 0.5 && ev.front() < 0.5)) return false;
  }
  return true;
}

struct RangeInclusion {
  bool included = false;
  /// (subset of E1, matching subset of E) for every subset of E1 when included.
  std::vector<std::pair<OutcomeSubset, OutcomeSubset>> witness;
};

/// ran(E1) ⊆ ran(E), effects compared in Frobenius distance.
inline RangeInclusion range_inclusion(const DiscretePOVM& e1, const DiscretePOVM& e,
                                      double tolerance = tol::effect_equality) {
  if (e1.dim() != e.dim()) throw std::invalid_argument("range_inclusion: dimension mismatch");
  const auto r1 = range_effects(e1);
  auto r = range_effects(e);
  // |tr A - tr B| <= sqrt(d) ||A - B||_F, so sort by trace and scan a window.
  std::vector<std::pair<double, std::size_t>> by_trace;
  by_trace.reserve(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) by_trace.emplace_back(r[i].effect.trace(), i);
  std::sort(by_trace.begin(), by_trace.end());
  const double window = tolerance * std::sqrt(static_cast<double>(e.dim()));

  RangeInclusion out;
  for (const auto& entry : r1) {
    const double t = entry.effect.trace();
    auto lo = std::lower_bound(by_trace.begin(), by_trace.end(), std::make_pair(t - window, std::size_t{0}));
    bool found = false;
    for (auto it = lo; it != by_trace.end() && it->first <= t + window; ++it) {
      if (frobenius_distance(entry.effect, r[it->second].effect) < tolerance) {
        out.witness.emplace_back(entry.subset, r[it->second].subset);
        found = true;
        break;
      }
    }
    if (!found) {
      out.witness.clear();
      return out;
    }
  }
  out.included = true;
  return out;
}

// ---- commutativity and joint observables ------------------------------------

inline double max_commutator_norm(const DiscretePOVM& e1, const DiscretePOVM& e2) {
  if (e1.dim() != e2.dim()) throw std::invalid_argument("commutes: dimension mismatch");
  double worst = 0.0;
  for (const auto& a : e1.effects())
    for (const auto& b : e2.effects()) worst = std::max(worst, commutator(a, b).frobenius_norm());
  return worst;
}

inline bool commutes(const DiscretePOVM& e1, const DiscretePOVM& e2, double tolerance) {
  return max_commutator_norm(e1, e2) < tolerance;
}

/// F(i,j) = E1_i E2_j for commuting E1, E2.
inline JointPOVM product_joint(const DiscretePOVM& e1, const DiscretePOVM& e2) {
  const double c = max_commutator_norm(e1, e2);
  if (!(c < tol::product_commutator))
    throw std::invalid_argument("product_joint: observables do not commute (commutator norm " + std::to_string(c) + ")");
  std::vector<std::vector<HermitianMatrix>> f(e1.size());
  for (std::size_t i = 0; i < e1.size(); ++i)
    for (std::size_t j = 0; j < e2.size(); ++j)
      f[i].push_back(HermitianMatrix::hermitian_part(e1[i].matrix() * e2[j].matrix()));
  return JointPOVM(e1.labels(), e2.labels(), std::move(f));
}

struct LudersResult {
  std::optional<DensityState> state;  // absent when the outcome has probability ~ 0
  double probability = 0.0;
};

/// rho -> A^{1/2} rho A^{1/2} / tr(rho A).
inline LudersResult luders(const DensityState& rho, const Effect& a) {
  if (rho.dim() != a.dim()) throw std::invalid_argument("luders: dimension mismatch");
  LudersResult out;
  out.probability = (rho.matrix().matrix() * a.matrix().matrix()).trace().real();
  if (out.probability <= tol::luders_probability) return out;
  const HermitianMatrix root = sqrt_psd(a.matrix());
  Matrix post = root.matrix() * rho.matrix().matrix() * root.matrix();
  post *= 1.0 / out.probability;
  out.state.emplace(HermitianMatrix::hermitian_part(post));
  return out;
}

}  // namespace coexkit
