#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "eigensign/numkit.hpp"
#include "eigensign/signsys.hpp"

namespace eigensign {

struct BruteForceResult {
  SignVector signs;          // minimizer of ‖C·s‖ with first entry +1
  double min_residual = 0.0; // ‖C·s‖ at the minimizer
  double runner_up = 0.0;    // ‖C·s‖ at the second-best distinct sign vector
};

/// Exhaustive search over the 2^{n−1} sign vectors with first entry +1
/// (the other half is redundant by the global-sign symmetry). Walks a Gray
/// code so each candidate costs one O(n) residual update. Throws when the
/// runner-up is within 1e−6·‖C‖_F of the minimum, which breaks the
/// uniqueness assumption.
inline BruteForceResult brute_force_signs(const SignSystem& sys) {
  const std::size_t n = sys.n;
  if (n > 24)
    throw std::invalid_argument("brute_force_signs: n > 24 would enumerate too many states");
  if (n < 1) throw std::invalid_argument("brute_force_signs: empty system");

  SignVector s(n, 1);
  Vector v = residual(sys, s);

  double best = norm_sq(v);
  double second = std::numeric_limits<double>::infinity();
  SignVector best_signs = s;

  const std::uint64_t count = 1ull << (n - 1);
  for (std::uint64_t t = 1; t < count; ++t) {
    // Gray-code step: flip free index ctz(t)+1 (index 0 stays +1).
    const std::size_t idx = static_cast<std::size_t>(std::countr_zero(t)) + 1;
    const double coeff = 2.0 * s[idx];
    for (std::size_t r = 0; r < n; ++r) v[r] -= coeff * sys.c(r, idx);
    s[idx] = -s[idx];

    const double r2 = norm_sq(v);
    if (r2 < best) {
      second = best;
      best = r2;
      best_signs = s;
    } else if (r2 < second) {
      second = r2;
    }
  }

  BruteForceResult result;
  result.signs = std::move(best_signs);
  result.min_residual = std::sqrt(best);
  result.runner_up = std::isfinite(second) ? std::sqrt(second) : result.min_residual;

  const double fnorm = std::sqrt(sys.frob_sq);
  if (count > 1 && result.runner_up - result.min_residual <= 1e-6 * fnorm)
    throw std::runtime_error(
        "brute_force_signs: ambiguous minimum (best " + std::to_string(result.min_residual) +
        ", runner-up " + std::to_string(result.runner_up) + ")");
  return result;
}

struct NullspaceCheck {
  double sigma_n = 0.0;
  double sigma_n_minus_1 = 0.0;
  bool unique = false;
};

/// The uniqueness test behind the whole setup: C must have a nullspace
/// (σ_n ≈ 0) and the gap σ_{n−1} must be bounded away from zero.
inline NullspaceCheck nullspace_unique(const SignSystem& sys) {
  if (sys.n < 2) throw std::invalid_argument("nullspace_unique: system must have n >= 2");
  const Vector sv = singular_values(sys.c);
  NullspaceCheck check;
  check.sigma_n = sv[sys.n - 1];
  check.sigma_n_minus_1 = sv[sys.n - 2];
  const double fnorm = std::sqrt(sys.frob_sq);
  check.unique = check.sigma_n <= 1e-8 * fnorm && check.sigma_n_minus_1 > 1e-6 * fnorm;
  return check;
}

}  // namespace eigensign
