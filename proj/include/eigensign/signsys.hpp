#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "eigensign/numkit.hpp"
#include "eigensign/problems.hpp"
#include "eigensign/random.hpp"

namespace eigensign {

/// The central object both algorithms operate on: C = B − λI with
/// B = D⁻¹AD and D = diag(|x_i|). The true sign vector spans its nullspace.
/// Row norms and their prefix sums are precomputed for weighted sampling.
struct SignSystem {
  std::size_t n = 0;
  DenseMatrix c;
  Vector row_norms_sq;
  double frob_sq = 0.0;
  Vector cum_weights;
};

inline SignSystem build_sign_system(const EigenPhaseProblem& p) {
  if (p.n == 0 || p.a.rows() != p.n || p.a.cols() != p.n || p.magnitudes.size() != p.n)
    throw std::invalid_argument("build_sign_system: malformed problem");
  for (double m : p.magnitudes)
    if (!(m > 0.0))
      throw std::invalid_argument("build_sign_system: magnitudes must be strictly positive");

  SignSystem sys;
  sys.n = p.n;
  sys.c = DenseMatrix(p.n, p.n);
  sys.row_norms_sq.resize(p.n);
  sys.cum_weights.resize(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    double row_sq = 0.0;
    const double inv_mi = 1.0 / p.magnitudes[i];
    for (std::size_t j = 0; j < p.n; ++j) {
      double v = p.a(i, j) * p.magnitudes[j] * inv_mi;
      if (i == j) v -= p.lambda;
      sys.c(i, j) = v;
      row_sq += v * v;
    }
    sys.row_norms_sq[i] = row_sq;
    sys.frob_sq += row_sq;
    sys.cum_weights[i] = sys.frob_sq;
  }
  if (!(sys.frob_sq > 0.0))
    throw std::runtime_error("build_sign_system: C is identically zero");
  return sys;
}

/// Draws row j with probability ‖c_j‖²/‖C‖_F². Rows with zero norm occupy an
/// empty interval of the prefix sums and are never returned.
inline std::size_t sample_row(const SignSystem& sys, RandomSource& rng) {
  const double u = rng.uniform() * sys.frob_sq;
  auto it = std::upper_bound(sys.cum_weights.begin(), sys.cum_weights.end(), u);
  if (it == sys.cum_weights.end()) {
    // u landed on the very top by rounding; fall back to the last nonzero row.
    std::size_t i = sys.n;
    while (i-- > 0)
      if (sys.row_norms_sq[i] > 0.0) return i;
    throw std::logic_error("sample_row: no row with positive norm");
  }
  return static_cast<std::size_t>(it - sys.cum_weights.begin());
}

/// C·s for a sign vector s.
inline Vector residual(const SignSystem& sys, const SignVector& s) {
  if (s.size() != sys.n) throw std::invalid_argument("residual: size mismatch");
  Vector v(sys.n, 0.0);
  for (std::size_t i = 0; i < sys.n; ++i) {
    const double* row = sys.c.row_data(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < sys.n; ++j) acc += row[j] * s[j];
    v[i] = acc;
  }
  return v;
}

/// Componentwise signs with sign(0) := +1. No canonicalization is applied.
inline SignVector extract_signs(const Vector& y) {
  SignVector s(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) s[i] = y[i] < 0.0 ? -1 : 1;
  return s;
}

}  // namespace eigensign
