#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eigensign/problems.hpp"

namespace eigensign {

enum class RunStatus { recovered, budget_exhausted };

/// Shared run parameters for both algorithms.
struct RunConfig {
  long long max_iters = 0;    // iteration / flip budget; must be >= 1
  long long check_every = 0;  // recovery-check cadence; 0 means "every n steps"
  double success_tol = 1e-8;  // success when ||C s|| <= success_tol * ||C||_F
  bool record_trace = true;
  long long trace_stride = 0;  // 0 means ceil(max_iters / 512)
  bool early_stop = true;      // disabled by ensemble drivers that need full traces
};

struct TracePoint {
  long long k = 0;
  double norm_sq = 0.0;                 // ||y_k||² (projections) or ||v_k||² (flips)
  std::optional<int> mismatch;          // min{#S, n−#S} when truth is known
  std::optional<double> weighted_obj;   // mismatch · ||y_k||²
  std::optional<double> bound;          // attached by ensemble drivers
};

struct RunReport {
  RunStatus status = RunStatus::budget_exhausted;
  long long iters_used = 0;
  SignVector final_signs;
  std::vector<TracePoint> trace;
};

inline long long effective_trace_stride(const RunConfig& cfg) {
  if (cfg.trace_stride > 0) return cfg.trace_stride;
  const long long stride = (cfg.max_iters + 511) / 512;
  return stride > 0 ? stride : 1;
}

}  // namespace eigensign
