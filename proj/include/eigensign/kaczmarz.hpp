#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>

#include "eigensign/numkit.hpp"
#include "eigensign/random.hpp"
#include "eigensign/report.hpp"
#include "eigensign/signsys.hpp"
#include "eigensign/theory.hpp"

namespace eigensign {

/// Iterate of the randomized projection algorithm. The component of y along
/// the true sign vector is conserved by every step; only the orthogonal part
/// evolves.
struct KaczmarzState {
  Vector y;
  long long k = 0;
};

inline KaczmarzState init_state(Vector y0) {
  if (!(norm_sq(y0) > 0.0))
    throw std::invalid_argument("init_state: starting vector must be nonzero");
  return KaczmarzState{std::move(y0), 0};
}

/// Start uniformly at random on the sphere of the given radius.
inline KaczmarzState init_state(std::size_t n, double radius, RandomSource& rng) {
  if (!(radius > 0.0)) throw std::invalid_argument("init_state: radius must be positive");
  Vector y = rng.unit_vector(n);
  for (auto& x : y) x *= radius;
  return KaczmarzState{std::move(y), 0};
}

/// Orthogonal projection of y onto the hyperplane {z : <c_row, z> = 0}.
inline void kaczmarz_project(Vector& y, const SignSystem& sys, std::size_t row) {
  const double row_sq = sys.row_norms_sq[row];
  if (row_sq <= 0.0) return;  // a zero row constrains nothing
  const double* c = sys.c.row_data(row);
  double inner = 0.0;
  for (std::size_t j = 0; j < sys.n; ++j) inner += y[j] * c[j];
  const double coeff = inner / row_sq;
  for (std::size_t j = 0; j < sys.n; ++j) y[j] -= coeff * c[j];
}

/// One step: sample a row with probability ‖c_j‖²/‖C‖_F², project onto its
/// hyperplane. Cost O(n).
inline void kaczmarz_step(KaczmarzState& state, const SignSystem& sys, RandomSource& rng) {
  kaczmarz_project(state.y, sys, sample_row(sys, rng));
  ++state.k;
}

/// Default step budget: 10·(‖C‖_F²/σ_{n−1}²)·log n when the spectral stats
/// are available, else 100·n·log n.
inline long long default_max_iters(const SignSystem& sys) {
  try {
    return 10 * spectral_stats(sys).predicted_iters;
  } catch (const std::exception&) {
    const double n = static_cast<double>(sys.n);
    return static_cast<long long>(std::ceil(100.0 * n * std::log(std::max(n, 2.0))));
  }
}

/// Full run of the projection algorithm. Every check_every steps the sign
/// candidate extract_signs(y) is tested against ‖C·ε̂‖ ≤ success_tol·‖C‖_F;
/// non-recovery within the budget is a reported status, not an error.
inline RunReport run_algorithm1(const SignSystem& sys, const RunConfig& cfg,
                                RandomSource& rng,
                                const std::optional<SignVector>& truth = std::nullopt,
                                std::optional<Vector> y0 = std::nullopt) {
  if (cfg.max_iters < 1) throw std::invalid_argument("run_algorithm1: max_iters must be >= 1");
  if (truth && truth->size() != sys.n)
    throw std::invalid_argument("run_algorithm1: truth length mismatch");

  KaczmarzState state = y0 ? init_state(std::move(*y0)) : init_state(sys.n, 1.0, rng);
  const long long check_every = cfg.check_every > 0 ? cfg.check_every
                                                    : static_cast<long long>(sys.n);
  const long long stride = effective_trace_stride(cfg);
  const double success_threshold = cfg.success_tol * std::sqrt(sys.frob_sq);

  RunReport report;
  auto record = [&](long long k) {
    TracePoint pt;
    pt.k = k;
    pt.norm_sq = norm_sq(state.y);
    if (truth) {
      const int mm = mismatch_min(extract_signs(state.y), *truth);
      pt.mismatch = mm;
      pt.weighted_obj = mm * pt.norm_sq;
    }
    report.trace.push_back(pt);
  };
  auto recovered = [&]() -> std::optional<SignVector> {
    SignVector candidate = extract_signs(state.y);
    if (norm(residual(sys, candidate)) <= success_threshold) return candidate;
    return std::nullopt;
  };

  if (cfg.record_trace) record(0);
  if (cfg.early_stop) {
    if (auto cand = recovered()) {
      report.status = RunStatus::recovered;
      report.iters_used = 0;
      report.final_signs = std::move(*cand);
      return report;
    }
  }

  for (long long k = 1; k <= cfg.max_iters; ++k) {
    kaczmarz_step(state, sys, rng);
    if (cfg.record_trace && k % stride == 0) record(k);
    if (cfg.early_stop && k % check_every == 0) {
      if (auto cand = recovered()) {
        report.status = RunStatus::recovered;
        report.iters_used = k;
        report.final_signs = std::move(*cand);
        if (cfg.record_trace && k % stride != 0) record(k);
        return report;
      }
    }
  }

  report.status = RunStatus::budget_exhausted;
  report.iters_used = cfg.max_iters;
  report.final_signs = extract_signs(state.y);
  return report;
}

}  // namespace eigensign
