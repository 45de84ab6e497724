#pragma once

// Dense complex matrices for small Hilbert spaces (d <= 32): Hermitian
// carriers, cyclic Jacobi diagonalization, PSD square roots and the qubit
// Bloch parametrization.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coexkit {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

namespace tol {
inline constexpr double hermitian = 1e-12;
inline constexpr double psd = 1e-10;
inline constexpr double effect = 1e-10;
inline constexpr double trace_one = 1e-12;
inline constexpr double sqrt_clamp = 1e-8;
inline constexpr double jacobi_offdiag = 1e-13;
}  // namespace tol

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline Vec3 scaled(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

/// General square complex matrix, row-major. Working type for products and
/// commutators; the invariant-carrying types below wrap it.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}
  Matrix(std::size_t dim, std::vector<cplx> entries) : dim_(dim), a_(std::move(entries)) {
    if (a_.size() != dim_ * dim_) throw std::invalid_argument("Matrix: entry count does not match dim*dim");
  }

  static Matrix identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }
  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  const std::vector<cplx>& data() const noexcept { return a_; }

  Matrix adjoint() const {
    Matrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : a_) s += std::norm(z);
    return std::sqrt(s);
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  Matrix& operator*=(cplx s) {
    for (auto& z : a_) z *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
  friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    a.check_same(b);
    const std::size_t n = a.dim_;
    Matrix r(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

 private:
  void check_same(const Matrix& o) const {
    if (o.dim_ != dim_) throw std::invalid_argument("Matrix: dimension mismatch");
  }

  std::size_t dim_ = 0;
  std::vector<cplx> a_;
};

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }
inline double frobenius_distance(const Matrix& a, const Matrix& b) { return (a - b).frobenius_norm(); }

/// Largest |A_ij - conj(A_ji)|.
inline double hermiticity_defect(const Matrix& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i; j < m.dim(); ++j) worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

/// Self-adjoint matrix. Construction checks Hermiticity to `tol::hermitian`
/// and then symmetrizes so that the stored entries are exactly Hermitian.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  explicit HermitianMatrix(const Matrix& m, double tolerance = tol::hermitian) : m_(m) {
    if (m.dim() == 0) throw std::invalid_argument("HermitianMatrix: dim must be >= 1");
    const double defect = hermiticity_defect(m);
    if (!(defect <= tolerance))
      throw std::invalid_argument("HermitianMatrix: not Hermitian (defect " + std::to_string(defect) + ")");
    symmetrize();
  }

  /// Hermitian part ½(M + M†) with no tolerance check.
  static HermitianMatrix hermitian_part(const Matrix& m) {
    HermitianMatrix h;
    h.m_ = m;
    h.symmetrize();
    return h;
  }

  static HermitianMatrix identity(std::size_t dim) { return hermitian_part(Matrix::identity(dim)); }
  static HermitianMatrix zero(std::size_t dim) { return hermitian_part(Matrix(dim)); }

  std::size_t dim() const noexcept { return m_.dim(); }
  const Matrix& matrix() const noexcept { return m_; }
  operator const Matrix&() const noexcept { return m_; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  double trace() const { return m_.trace().real(); }
  double frobenius_norm() const { return m_.frobenius_norm(); }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    return hermitian_part(a.m_ + b.m_);
  }
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    return hermitian_part(a.m_ - b.m_);
  }
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a) { return hermitian_part(a.m_ * s); }
  friend HermitianMatrix operator*(const HermitianMatrix& a, double s) { return s * a; }

 private:
  void symmetrize() {
    const std::size_t n = m_.dim();
    for (std::size_t i = 0; i < n; ++i) {
      m_(i, i) = m_(i, i).real();
      for (std::size_t j = i + 1; j < n; ++j) {
        const cplx avg = 0.5 * (m_(i, j) + std::conj(m_(j, i)));
        m_(i, j) = avg;
        m_(j, i) = std::conj(avg);
      }
    }
  }

  Matrix m_;
};

struct Eigensystem {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k is the eigenvector of values[k]
};

namespace detail {

inline double offdiag_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Cyclic Jacobi with complex rotations: a diagonal phase makes the pivot
// real, then a real Givens rotation annihilates it.
inline Eigensystem jacobi(const HermitianMatrix& h) {
  const std::size_t n = h.dim();
  Matrix a = h.matrix();
  Matrix v = Matrix::identity(n);
  const double scale = std::max(1.0, a.frobenius_norm());

  for (int sweep = 0; sweep < 100 && offdiag_norm(a) >= tol::jacobi_offdiag * scale; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r < 1e-300) continue;
        const cplx phase = a(p, q) / r;  // e^{i phi}
        const double alpha = a(p, p).real();
        const double beta = a(q, q).real();
        const double theta = (beta - alpha) / (2.0 * r);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // U restricted to the (p,q) plane.
        const cplx upp = c, upq = s, uqp = -s * std::conj(phase), uqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {  // a <- a U
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // a <- U^dagger a
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {  // v <- v U
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  Eigensystem es{std::vector<double>(n), Matrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    es.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) es.vectors(i, k) = v(i, order[k]);
  }
  return es;
}

}  // namespace detail

/// Full ascending spectrum. d = 2 uses a0 ± |a|; larger d uses Jacobi.
inline std::vector<double> eigenvalues(const HermitianMatrix& h) {
  if (h.dim() == 1) return {h(0, 0).real()};
  if (h.dim() == 2) {
    const double a0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
    const double az = 0.5 * (h(0, 0).real() - h(1, 1).real());
    const double r = std::hypot(std::abs(h(0, 1)), az);
    return {a0 - r, a0 + r};
  }
  return detail::jacobi(h).values;
}

inline Eigensystem eigensystem(const HermitianMatrix& h) { return detail::jacobi(h); }

inline double min_eigenvalue(const HermitianMatrix& h) { return eigenvalues(h).front(); }
inline double max_eigenvalue(const HermitianMatrix& h) { return eigenvalues(h).back(); }

inline bool is_psd(const HermitianMatrix& h, double tolerance = tol::psd) { return min_eigenvalue(h) >= -tolerance; }

/// Principal square root of a PSD matrix. Eigenvalues in [-1e-8, 0) are
/// treated as round-off and clamped; anything more negative is rejected.
inline HermitianMatrix sqrt_psd(const HermitianMatrix& h) {
  const Eigensystem es = eigensystem(h);
  if (es.values.front() < -tol::sqrt_clamp)
    throw std::domain_error("sqrt_psd: matrix is not positive semidefinite (eigenvalue " +
                            std::to_string(es.values.front()) + ")");
  const std::size_t n = h.dim();
  Matrix s(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double root = std::sqrt(std::max(es.values[k], 0.0));
    if (root == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s(i, j) += root * es.vectors(i, k) * std::conj(es.vectors(j, k));
  }
  return HermitianMatrix::hermitian_part(s);
}

/// Positive operator bounded by the identity: O <= A <= I.
class Effect {
 public:
  explicit Effect(HermitianMatrix m, double tolerance = tol::effect) : m_(std::move(m)) {
    const auto ev = eigenvalues(m_);
    if (ev.front() < -tolerance || ev.back() > 1.0 + tolerance)
      throw std::invalid_argument("Effect: spectrum [" + std::to_string(ev.front()) + ", " +
                                  std::to_string(ev.back()) + "] outside [0, 1]");
  }

  const HermitianMatrix& matrix() const noexcept { return m_; }
  operator const HermitianMatrix&() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.dim(); }

 private:
  HermitianMatrix m_;
};

/// Positive trace-one operator.
class DensityState {
 public:
  explicit DensityState(HermitianMatrix m) : m_(std::move(m)) {
    if (std::abs(m_.trace() - 1.0) > tol::trace_one)
      throw std::invalid_argument("DensityState: trace " + std::to_string(m_.trace()) + " != 1");
    if (!is_psd(m_, tol::psd)) throw std::invalid_argument("DensityState: not positive semidefinite");
  }

  const HermitianMatrix& matrix() const noexcept { return m_; }
  operator const HermitianMatrix&() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.dim(); }

 private:
  HermitianMatrix m_;
};

// ---- qubit ----------------------------------------------------------------

inline const std::array<Matrix, 3>& pauli() {
  static const std::array<Matrix, 3> s = {
      Matrix(2, {0.0, 1.0, 1.0, 0.0}),
      Matrix(2, {0.0, cplx(0, -1), cplx(0, 1), 0.0}),
      Matrix(2, {1.0, 0.0, 0.0, -1.0}),
  };
  return s;
}

/// a0 I + a . sigma
struct QubitBloch {
  double a0 = 0.0;
  Vec3 a{0.0, 0.0, 0.0};

  /// O <= A <= I  <=>  |a| <= min(a0, 1 - a0).
  bool is_effect(double tolerance = tol::effect) const { return norm(a) <= std::min(a0, 1.0 - a0) + tolerance; }
};

inline HermitianMatrix bloch_to_matrix(const QubitBloch& q) {
  Matrix m = Matrix::identity(2) * cplx(q.a0);
  for (int k = 0; k < 3; ++k) m += pauli()[k] * cplx(q.a[k]);
  return HermitianMatrix::hermitian_part(m);
}

inline QubitBloch matrix_to_bloch(const HermitianMatrix& h) {
  if (h.dim() != 2) throw std::invalid_argument("matrix_to_bloch: dimension must be 2");
  QubitBloch q;
  q.a0 = 0.5 * h.trace();
  for (int k = 0; k < 3; ++k) q.a[k] = 0.5 * (h.matrix() * pauli()[k]).trace().real();
  return q;
}

/// Spectral projection ½(I ± n·σ) of the spin component along unit n.
inline HermitianMatrix spin_projection(const Vec3& n, int sign) {
  return bloch_to_matrix({0.5, scaled(n, 0.5 * sign)});
}

/// ½(I + r·σ), |r| <= 1.
inline DensityState qubit_state(const Vec3& r) { return DensityState(bloch_to_matrix({0.5, scaled(r, 0.5)})); }

}  // namespace coexkit
