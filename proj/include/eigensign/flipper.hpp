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

/// State of the residual-weighted sign-flip algorithm. The cached residual
/// v = C·s is maintained incrementally, one column read per flip.
struct FlipState {
  SignVector s;
  Vector v;
  long long k = 0;
};

inline FlipState init_flip(SignVector s0, const SignSystem& sys) {
  if (s0.size() != sys.n) throw std::invalid_argument("init_flip: size mismatch");
  for (int x : s0)
    if (x != 1 && x != -1) throw std::invalid_argument("init_flip: entries must be ±1");
  FlipState state;
  state.v = residual(sys, s0);
  state.s = std::move(s0);
  return state;
}

inline FlipState init_flip(std::size_t n, const SignSystem& sys, RandomSource& rng) {
  SignVector s(n);
  for (auto& x : s) x = rng.rademacher();
  return init_flip(std::move(s), sys);
}

/// Index i drawn with probability v_i² / Σ_ℓ v_ℓ².
inline std::size_t sample_by_squared_magnitude(const Vector& v, RandomSource& rng) {
  double total = 0.0;
  for (double x : v) total += x * x;
  if (!(total > 0.0))
    throw std::invalid_argument("sample_by_squared_magnitude: all weights are zero");
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = v[i] * v[i];
    if (w > 0.0) last_positive = i;
    acc += w;
    if (u < acc) return i;
  }
  return last_positive;  // rounding pushed u to the top of the range
}

/// Flips entry `index` of s and updates the cached residual:
/// v' = v − 2·s_index·(column index of C). Cost O(n).
inline void apply_flip(FlipState& state, const SignSystem& sys, std::size_t index) {
  const double coeff = 2.0 * state.s[index];
  for (std::size_t r = 0; r < sys.n; ++r) state.v[r] -= coeff * sys.c(r, index);
  state.s[index] = -state.s[index];
  ++state.k;
}

/// One flip, entry chosen with probability v_i²/Σv_ℓ². Returns false without
/// acting when the residual is already zero (the converged state is absorbing).
inline bool flip_step(FlipState& state, const SignSystem& sys, RandomSource& rng) {
  if (!(norm_sq(state.v) > 0.0)) return false;
  apply_flip(state, sys, sample_by_squared_magnitude(state.v, rng));
  return true;
}

/// Full run of the sign-flip algorithm: flips until ‖v‖ ≤ success_tol·‖C‖_F
/// or the budget is spent.
inline RunReport run_algorithm2(const SignSystem& sys, const RunConfig& cfg,
                                RandomSource& rng,
                                const std::optional<SignVector>& truth = std::nullopt,
                                std::optional<SignVector> s0 = std::nullopt) {
  if (cfg.max_iters < 1) throw std::invalid_argument("run_algorithm2: max_iters must be >= 1");
  if (truth && truth->size() != sys.n)
    throw std::invalid_argument("run_algorithm2: truth length mismatch");

  FlipState state = s0 ? init_flip(std::move(*s0), sys) : init_flip(sys.n, sys, rng);
  const long long stride = effective_trace_stride(cfg);
  const double success_threshold = cfg.success_tol * std::sqrt(sys.frob_sq);

  RunReport report;
  auto record = [&](long long k) {
    TracePoint pt;
    pt.k = k;
    pt.norm_sq = norm_sq(state.v);
    if (truth) {
      const int mm = mismatch_min(state.s, *truth);
      pt.mismatch = mm;
      pt.weighted_obj = mm * pt.norm_sq;
    }
    report.trace.push_back(pt);
  };

  if (cfg.record_trace) record(0);
  for (long long k = 0; k <= cfg.max_iters; ++k) {
    if (cfg.early_stop && norm(state.v) <= success_threshold) {
      report.status = RunStatus::recovered;
      report.iters_used = k;
      report.final_signs = state.s;
      if (cfg.record_trace && (report.trace.empty() || report.trace.back().k != k)) record(k);
      return report;
    }
    if (k == cfg.max_iters) break;
    flip_step(state, sys, rng);
    if (cfg.record_trace && (k + 1) % stride == 0) record(k + 1);
  }

  report.status = RunStatus::budget_exhausted;
  report.iters_used = cfg.max_iters;
  report.final_signs = state.s;
  return report;
}

}  // namespace eigensign
