#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "eigensign/numkit.hpp"
#include "eigensign/signsys.hpp"

namespace eigensign {

/// Spectral quantities governing the convergence of the projection algorithm.
struct SpectralStats {
  double sigma_n = 0.0;          // smallest singular value of C (≈ 0 for valid instances)
  double sigma_n_minus_1 = 0.0;  // the spectral gap
  double frob_sq = 0.0;
  double contraction = 0.0;      // 1 − σ_{n−1}²/‖C‖_F², the per-step expected decay rate
  long long predicted_iters = 0; // ceil((‖C‖_F²/σ_{n−1}²)·log n)
};

inline SpectralStats spectral_stats(const SignSystem& sys) {
  if (sys.n < 2) throw std::invalid_argument("spectral_stats: system must have n >= 2");
  const Vector sv = singular_values(sys.c);
  SpectralStats stats;
  stats.sigma_n = sv[sys.n - 1];
  stats.sigma_n_minus_1 = sv[sys.n - 2];
  stats.frob_sq = sys.frob_sq;
  const double fnorm = std::sqrt(sys.frob_sq);
  if (stats.sigma_n_minus_1 <= 1e-8 * fnorm)
    throw std::runtime_error("spectral_stats: degenerate spectral gap (sigma_{n-1} ~ 0)");
  const double ratio = stats.sigma_n_minus_1 * stats.sigma_n_minus_1 / stats.frob_sq;
  stats.contraction = std::max(0.0, 1.0 - ratio);
  stats.predicted_iters =
      static_cast<long long>(std::ceil((1.0 / ratio) * std::log(static_cast<double>(sys.n))));
  return stats;
}

/// min{#S, n − #S} where S is the disagreement set; the global-sign ambiguity
/// makes a full flip count as zero.
inline int mismatch_min(const SignVector& candidate, const SignVector& truth) {
  if (candidate.size() != truth.size())
    throw std::invalid_argument("mismatch_min: length mismatch");
  int disagree = 0;
  for (std::size_t i = 0; i < candidate.size(); ++i)
    if (candidate[i] != truth[i]) ++disagree;
  return std::min(disagree, static_cast<int>(candidate.size()) - disagree);
}

/// The main bound: n · contraction^k · ‖y₀‖².
inline double theorem_bound(const SpectralStats& stats, long long k, double y0_norm_sq,
                            std::size_t n) {
  if (k < 0) throw std::invalid_argument("theorem_bound: k must be nonnegative");
  return static_cast<double>(n) * std::pow(stats.contraction, static_cast<double>(k)) *
         y0_norm_sq;
}

/// Orthogonal split y = pi + r with pi the projection onto span(ε).
struct OrthoDecomposition {
  Vector pi;
  Vector r;
};

inline OrthoDecomposition decompose(const Vector& y, const SignVector& truth) {
  if (y.size() != truth.size()) throw std::invalid_argument("decompose: length mismatch");
  const std::size_t n = y.size();
  double inner = 0.0;
  for (std::size_t i = 0; i < n; ++i) inner += y[i] * truth[i];
  const double coeff = inner / static_cast<double>(n);  // ‖ε‖² = n
  OrthoDecomposition d;
  d.pi.resize(n);
  d.r.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.pi[i] = coeff * truth[i];
    d.r[i] = y[i] - d.pi[i];
  }
  return d;
}

/// Exact one-step conditional expectation of ‖r‖² under weighted row
/// projection: ‖r‖² − ‖C·r‖²/‖C‖_F².
inline double expected_step_decay(const SignSystem& sys, const Vector& r) {
  if (r.size() != sys.n) throw std::invalid_argument("expected_step_decay: size mismatch");
  const Vector cr = matvec(sys.c, r);
  return norm_sq(r) - norm_sq(cr) / sys.frob_sq;
}

/// Both sides of the sign-mismatch inequality:
/// lhs = ‖r‖², rhs = (min{#S, n−#S}/n)·‖y‖², with lhs ≥ rhs guaranteed.
struct Lemma2Sides {
  double lhs = 0.0;
  double rhs = 0.0;
};

inline Lemma2Sides lemma2_gap(const Vector& y, const SignVector& truth) {
  if (y.size() != truth.size()) throw std::invalid_argument("lemma2_gap: length mismatch");
  Lemma2Sides sides;
  sides.lhs = norm_sq(decompose(y, truth).r);
  const int mm = mismatch_min(extract_signs(y), truth);
  sides.rhs = static_cast<double>(mm) / static_cast<double>(y.size()) * norm_sq(y);
  return sides;
}

/// Mean |(C·candidate)_i| split by whether the candidate sign agrees with the
/// truth (after orienting the truth to the nearer global sign). An empty side
/// is reported as absent.
struct ResidualSplit {
  std::optional<double> mean_abs_correct;
  std::optional<double> mean_abs_incorrect;
};

inline ResidualSplit residual_split(const SignSystem& sys, const SignVector& candidate,
                                    const SignVector& truth) {
  if (candidate.size() != sys.n || truth.size() != sys.n)
    throw std::invalid_argument("residual_split: size mismatch");
  int disagree = 0;
  for (std::size_t i = 0; i < sys.n; ++i)
    if (candidate[i] != truth[i]) ++disagree;
  const int orient = (2 * disagree > static_cast<int>(sys.n)) ? -1 : 1;

  const Vector v = residual(sys, candidate);
  double sum_correct = 0.0, sum_incorrect = 0.0;
  std::size_t n_correct = 0, n_incorrect = 0;
  for (std::size_t i = 0; i < sys.n; ++i) {
    if (candidate[i] == orient * truth[i]) {
      sum_correct += std::abs(v[i]);
      ++n_correct;
    } else {
      sum_incorrect += std::abs(v[i]);
      ++n_incorrect;
    }
  }
  ResidualSplit split;
  if (n_correct > 0) split.mean_abs_correct = sum_correct / n_correct;
  if (n_incorrect > 0) split.mean_abs_incorrect = sum_incorrect / n_incorrect;
  return split;
}

}  // namespace eigensign
