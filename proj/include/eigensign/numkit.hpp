#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "eigensign/random.hpp"

namespace eigensign {

using Vector = std::vector<double>;

/// Dense real matrix, row-major storage.
class DenseMatrix {
 public:
  DenseMatrix() = default;

  DenseMatrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {
    if (rows == 0 || cols == 0)
      throw std::invalid_argument("DenseMatrix: dimensions must be positive");
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  const double* row_data(std::size_t i) const { return data_.data() + i * cols_; }
  double* row_data(std::size_t i) { return data_.data() + i * cols_; }

  const std::vector<double>& entries() const { return data_; }
  std::vector<double>& entries() { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  bool all_finite() const {
    for (double x : data_)
      if (!std::isfinite(x)) return false;
    return true;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// ---------------------------------------------------------------------------
// Vector helpers
// ---------------------------------------------------------------------------

inline double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_sq(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

inline double norm(const Vector& v) { return std::sqrt(norm_sq(v)); }

inline bool all_finite(const Vector& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Basic matrix operations
// ---------------------------------------------------------------------------

inline Vector matvec(const DenseMatrix& m, const Vector& v) {
  if (m.cols() != v.size()) throw std::invalid_argument("matvec: dimension mismatch");
  Vector out(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double* row = m.row_data(i);
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += row[j] * v[j];
    out[i] = s;
  }
  return out;
}

/// Squared Frobenius norm, equal to tr(M Mᵀ).
inline double frobenius_sq(const DenseMatrix& m) {
  double s = 0.0;
  for (double x : m.entries()) s += x * x;
  return s;
}

// ---------------------------------------------------------------------------
// LU factorization with partial pivoting
// ---------------------------------------------------------------------------

class LuFactorization {
 public:
  explicit LuFactorization(DenseMatrix m) : lu_(std::move(m)) {
    if (!lu_.square()) throw std::invalid_argument("LuFactorization: matrix must be square");
    const std::size_t n = lu_.rows();
    perm_.resize(n);
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    // A pivot below this scale is treated as an exact zero.
    const double pivot_floor = 1e-14 * lu_.max_abs();
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t pivot_row = col;
      double pivot_mag = std::abs(lu_(col, col));
      for (std::size_t r = col + 1; r < n; ++r) {
        const double mag = std::abs(lu_(r, col));
        if (mag > pivot_mag) {
          pivot_mag = mag;
          pivot_row = r;
        }
      }
      if (pivot_mag <= pivot_floor)
        throw std::runtime_error("LuFactorization: matrix is numerically singular");
      if (pivot_row != col) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(col, j), lu_(pivot_row, j));
        std::swap(perm_[col], perm_[pivot_row]);
      }
      const double inv_pivot = 1.0 / lu_(col, col);
      for (std::size_t r = col + 1; r < n; ++r) {
        const double factor = lu_(r, col) * inv_pivot;
        lu_(r, col) = factor;
        for (std::size_t j = col + 1; j < n; ++j) lu_(r, j) -= factor * lu_(col, j);
      }
    }
  }

  Vector solve(const Vector& b) const {
    const std::size_t n = lu_.rows();
    if (b.size() != n) throw std::invalid_argument("LuFactorization::solve: size mismatch");
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = b[perm_[i]];
    // Forward substitution with unit lower triangle.
    for (std::size_t i = 1; i < n; ++i) {
      double s = y[i];
      for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * y[j];
      y[i] = s;
    }
    // Back substitution.
    for (std::size_t ii = n; ii-- > 0;) {
      double s = y[ii];
      for (std::size_t j = ii + 1; j < n; ++j) s -= lu_(ii, j) * y[j];
      y[ii] = s / lu_(ii, ii);
    }
    return y;
  }

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> perm_;
};

/// Solves M·y = b by partially pivoted elimination.
inline Vector lu_solve(const DenseMatrix& m, const Vector& b) {
  if (!m.square()) throw std::invalid_argument("lu_solve: matrix must be square");
  if (b.size() != m.rows()) throw std::invalid_argument("lu_solve: dimension mismatch");
  return LuFactorization(m).solve(b);
}

// ---------------------------------------------------------------------------
// Eigenvalue / singular value routines
// ---------------------------------------------------------------------------

struct EigenPair {
  double value = 0.0;
  Vector vector;
};

namespace detail {

// Flip the vector so its first nonzero entry is positive.
inline void canonicalize_direction(Vector& v) {
  for (double x : v) {
    if (x != 0.0) {
      if (x < 0.0)
        for (auto& e : v) e = -e;
      return;
    }
  }
}

inline double eigen_residual(const DenseMatrix& m, const Vector& v, double lambda) {
  Vector w = matvec(m, v);
  double r = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = w[i] - lambda * v[i];
    r += d * d;
  }
  return std::sqrt(r);
}

// Tries to read an eigenpair out of the current iterate. The plain Rayleigh
// candidate handles a simple dominant eigenvalue; the two paired candidates
// w ± ‖w‖·v extract an eigenvector when the iteration oscillates between a
// ±μ eigenvalue pair.
inline bool accept_candidate(const DenseMatrix& m, const Vector& v, const Vector& w,
                             double threshold, EigenPair& out) {
  const double lambda = dot(v, w);
  double res_sq = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = w[i] - lambda * v[i];
    res_sq += d * d;
  }
  if (std::sqrt(res_sq) <= threshold) {
    out.value = lambda;
    out.vector = v;
    canonicalize_direction(out.vector);
    return true;
  }
  const double mu = norm(w);
  if (mu > 0.0) {
    for (const double sign : {1.0, -1.0}) {
      Vector cand(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) cand[i] = w[i] + sign * mu * v[i];
      const double cn = norm(cand);
      if (cn <= 1e-8 * mu) continue;
      for (auto& x : cand) x /= cn;
      const double cl = sign * mu;
      if (eigen_residual(m, cand, cl) <= threshold) {
        out.value = cl;
        out.vector = std::move(cand);
        canonicalize_direction(out.vector);
        return true;
      }
    }
  }
  return false;
}

}  // namespace detail

/// Power iteration with Rayleigh-quotient estimates. Returns (λ̂, v̂) with
/// ‖M v̂ − λ̂ v̂‖ ≤ tol·‖M‖_F and ‖v̂‖ = 1, the first nonzero entry of v̂
/// positive.
inline EigenPair power_iteration(const DenseMatrix& m, double tol, int max_iters,
                                 RandomSource& rng) {
  if (!m.square()) throw std::invalid_argument("power_iteration: matrix must be square");
  const std::size_t n = m.rows();
  const double threshold = tol * std::sqrt(frobenius_sq(m));
  Vector v = rng.unit_vector(n);
  double last_residual = std::numeric_limits<double>::infinity();
  EigenPair result;
  for (int iter = 0; iter < max_iters; ++iter) {
    Vector w = matvec(m, v);
    if (detail::accept_candidate(m, v, w, threshold, result)) return result;
    last_residual = detail::eigen_residual(m, v, dot(v, w));
    const double wn = norm(w);
    if (wn < 1e-300)
      throw std::runtime_error("power_iteration: iterate collapsed to zero");
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;
  }
  throw std::runtime_error("power_iteration: no convergence within " +
                           std::to_string(max_iters) + " iterations (last residual " +
                           std::to_string(last_residual) + ")");
}

/// Inverse iteration: converges to the eigenpair of M whose eigenvalue is
/// nearest the shift. Same residual contract as power_iteration.
inline EigenPair inverse_iteration(const DenseMatrix& m, double shift, double tol,
                                   int max_iters, RandomSource& rng) {
  if (!m.square()) throw std::invalid_argument("inverse_iteration: matrix must be square");
  const std::size_t n = m.rows();
  DenseMatrix shifted = m;
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= shift;
  LuFactorization lu(std::move(shifted));  // throws if the shift hits an eigenvalue

  const double threshold = tol * std::sqrt(frobenius_sq(m));
  Vector v = rng.unit_vector(n);
  double last_residual = std::numeric_limits<double>::infinity();
  EigenPair result;
  for (int iter = 0; iter < max_iters; ++iter) {
    Vector w = lu.solve(v);
    if (!all_finite(w))
      throw std::runtime_error("inverse_iteration: solve produced non-finite values");
    const double wn = norm(w);
    if (wn < 1e-300)
      throw std::runtime_error("inverse_iteration: iterate collapsed to zero");
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;
    Vector mv = matvec(m, v);
    if (detail::accept_candidate(m, v, mv, threshold, result)) return result;
    last_residual = detail::eigen_residual(m, v, dot(v, mv));
  }
  throw std::runtime_error("inverse_iteration: no convergence within " +
                           std::to_string(max_iters) + " iterations (last residual " +
                           std::to_string(last_residual) + ")");
}

/// All eigenvalues of a symmetric matrix, descending, via cyclic Jacobi
/// rotations. Sweeps until the off-diagonal Frobenius mass falls below
/// 1e-12·‖S‖_F.
inline Vector symmetric_eigenvalues(const DenseMatrix& s) {
  if (!s.square()) throw std::invalid_argument("symmetric_eigenvalues: matrix must be square");
  const std::size_t n = s.rows();
  const double scale = s.max_abs();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(s(i, j) - s(j, i)) > 1e-12 * scale)
        throw std::invalid_argument("symmetric_eigenvalues: matrix is not symmetric");

  DenseMatrix a = s;
  const double target = 1e-12 * std::sqrt(frobenius_sq(s));
  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off_sq += 2.0 * a(i, j) * a(i, j);
    if (std::sqrt(off_sq) <= target) {
      Vector eig(n);
      for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
      std::sort(eig.begin(), eig.end(), std::greater<double>());
      return eig;
    }
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        // Stable choice of the smaller rotation angle.
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
      }
    }
  }
  throw std::runtime_error("symmetric_eigenvalues: Jacobi sweeps did not converge");
}

/// Singular values of a square matrix, descending, computed as square roots
/// of the eigenvalues of MᵀM clamped at zero.
inline Vector singular_values(const DenseMatrix& m) {
  if (!m.square()) throw std::invalid_argument("singular_values: matrix must be square");
  const std::size_t n = m.rows();
  DenseMatrix gram(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += m(k, i) * m(k, j);
      gram(i, j) = s;
      gram(j, i) = s;
    }
  }
  Vector eig = symmetric_eigenvalues(gram);
  for (auto& x : eig) x = std::sqrt(std::max(x, 0.0));
  return eig;
}

}  // namespace eigensign
