#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eigensign/flipper.hpp"
#include "eigensign/kaczmarz.hpp"
#include "eigensign/problems.hpp"
#include "eigensign/report.hpp"
#include "eigensign/signsys.hpp"
#include "eigensign/theory.hpp"

namespace eigensign {

/// Monte-Carlo aggregate of projection runs on a shared k-grid, with the
/// contraction bound and the norm floor attached for comparison.
struct EnsembleReport {
  int trials = 0;
  std::vector<long long> grid;
  Vector mean_weighted_obj;
  Vector sem_weighted_obj;
  Vector mean_norm_sq;
  Vector sem_norm_sq;
  Vector bound;             // n · contraction^k · ‖y₀‖² per grid point
  double norm_floor = 0.0;  // ‖y₀‖²/n
  double recovery_rate = 0.0;
  std::vector<std::uint64_t> seeds;
};

/// Runs `trials` independent full-budget projection runs (y₀ uniform on the
/// unit sphere, per-trial seed derived from master_seed) and aggregates the
/// weighted mismatch objective and ‖y_k‖² on a shared grid. Early stopping is
/// disabled so every trial covers the whole grid.
inline EnsembleReport monte_carlo_algorithm1(const EigenPhaseProblem& problem, int trials,
                                             const RunConfig& cfg,
                                             std::uint64_t master_seed) {
  if (!problem.truth_signs)
    throw std::invalid_argument("monte_carlo_algorithm1: problem needs ground-truth signs");
  if (trials < 1) throw std::invalid_argument("monte_carlo_algorithm1: trials must be >= 1");

  const SignSystem sys = build_sign_system(problem);
  const SpectralStats stats = spectral_stats(sys);

  RunConfig run_cfg = cfg;
  run_cfg.early_stop = false;
  run_cfg.record_trace = true;
  run_cfg.trace_stride = effective_trace_stride(cfg);

  EnsembleReport ensemble;
  ensemble.trials = trials;
  for (long long k = 0; k <= run_cfg.max_iters; k += run_cfg.trace_stride)
    ensemble.grid.push_back(k);
  const std::size_t points = ensemble.grid.size();
  Vector sum_w(points, 0.0), sum_w2(points, 0.0), sum_n(points, 0.0), sum_n2(points, 0.0);

  const double success_threshold = cfg.success_tol * std::sqrt(sys.frob_sq);
  int recovered = 0;
  for (int t = 0; t < trials; ++t) {
    RandomSource rng = RandomSource::derived(master_seed, static_cast<std::uint64_t>(t));
    ensemble.seeds.push_back(static_cast<std::uint64_t>(t));
    const RunReport report = run_algorithm1(sys, run_cfg, rng, problem.truth_signs);
    if (report.trace.size() != points)
      throw std::logic_error("monte_carlo_algorithm1: trace does not cover the grid");
    for (std::size_t g = 0; g < points; ++g) {
      const TracePoint& pt = report.trace[g];
      const double w = pt.weighted_obj.value_or(0.0);
      sum_w[g] += w;
      sum_w2[g] += w * w;
      sum_n[g] += pt.norm_sq;
      sum_n2[g] += pt.norm_sq * pt.norm_sq;
    }
    if (norm(residual(sys, report.final_signs)) <= success_threshold) ++recovered;
  }

  ensemble.mean_weighted_obj.resize(points);
  ensemble.sem_weighted_obj.resize(points);
  ensemble.mean_norm_sq.resize(points);
  ensemble.sem_norm_sq.resize(points);
  ensemble.bound.resize(points);
  for (std::size_t g = 0; g < points; ++g) {
    const double mw = sum_w[g] / trials;
    const double mn = sum_n[g] / trials;
    ensemble.mean_weighted_obj[g] = mw;
    ensemble.mean_norm_sq[g] = mn;
    if (trials > 1) {
      const double var_w = std::max(0.0, (sum_w2[g] - trials * mw * mw) / (trials - 1));
      const double var_n = std::max(0.0, (sum_n2[g] - trials * mn * mn) / (trials - 1));
      ensemble.sem_weighted_obj[g] = std::sqrt(var_w / trials);
      ensemble.sem_norm_sq[g] = std::sqrt(var_n / trials);
    }
    ensemble.bound[g] = theorem_bound(stats, ensemble.grid[g], 1.0, sys.n);
  }
  ensemble.norm_floor = 1.0 / static_cast<double>(sys.n);
  ensemble.recovery_rate = static_cast<double>(recovered) / trials;
  return ensemble;
}

// ---------------------------------------------------------------------------
// Figure reproduction
// ---------------------------------------------------------------------------

enum class Figure { fig1, fig2, fig3 };

inline const char* figure_name(Figure which) {
  switch (which) {
    case Figure::fig1: return "fig1";
    case Figure::fig2: return "fig2";
    case Figure::fig3: return "fig3";
  }
  throw std::invalid_argument("figure_name: unknown figure");
}

namespace protocol {

// The random-matrix figure uses one fixed instance, mirroring the Hadamard
// figures where the matrix is fully deterministic; run seeds vary per trace.
inline constexpr std::uint64_t kFig3InstanceSeed = 20260301;

inline constexpr long long kHadamardAlg1Budget = 50000;
inline constexpr long long kFig1Alg2Budget = 5000;
inline constexpr long long kFig2Alg2Budget = 100000;
inline constexpr long long kFig3Alg1Budget = 4000000;
inline constexpr long long kFig3Alg2Budget = 10000;

}  // namespace protocol

struct FigureProtocol {
  EigenPhaseProblem problem;
  RunConfig alg1;
  RunConfig alg2;
};

/// The problem instance and run budgets belonging to each figure.
inline FigureProtocol figure_protocol(Figure which) {
  FigureProtocol fp;
  switch (which) {
    case Figure::fig1:
      fp.problem = hadamard_perturbed(HadamardEnd::top);
      fp.alg1.max_iters = protocol::kHadamardAlg1Budget;
      fp.alg2.max_iters = protocol::kFig1Alg2Budget;
      break;
    case Figure::fig2:
      fp.problem = hadamard_perturbed(HadamardEnd::bottom);
      fp.alg1.max_iters = protocol::kHadamardAlg1Budget;
      fp.alg2.max_iters = protocol::kFig2Alg2Budget;
      break;
    case Figure::fig3: {
      RandomSource rng(protocol::kFig3InstanceSeed);
      fp.problem = gaussian_spiked(rng);
      fp.alg1.max_iters = protocol::kFig3Alg1Budget;
      fp.alg2.max_iters = protocol::kFig3Alg2Budget;
      break;
    }
  }
  return fp;
}

// ---------------------------------------------------------------------------
// Trace CSV
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace detail

/// Writes `k,norm_sq,mismatch,weighted_obj,bound` with 17 significant digits;
/// absent fields become empty cells.
inline std::filesystem::path write_trace_csv(const RunReport& report,
                                             const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace_csv: cannot open " + path.string());
  out << "k,norm_sq,mismatch,weighted_obj,bound\n";
  for (const TracePoint& pt : report.trace) {
    out << pt.k << ',' << detail::format_real(pt.norm_sq) << ',';
    if (pt.mismatch) out << *pt.mismatch;
    out << ',';
    if (pt.weighted_obj) out << detail::format_real(*pt.weighted_obj);
    out << ',';
    if (pt.bound) out << detail::format_real(*pt.bound);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write_trace_csv: write failed for " + path.string());
  return path;
}

/// Runs both algorithms once on the figure's instance with run randomness
/// derived from master_seed, and writes one trace CSV per algorithm under
/// `<out_dir>/<figure>/<alg>_<seed>.csv`.
inline std::vector<std::filesystem::path> reproduce_figure(
    Figure which, const std::filesystem::path& out_dir, std::uint64_t master_seed) {
  FigureProtocol fp = figure_protocol(which);
  const SignSystem sys = build_sign_system(fp.problem);

  std::optional<SpectralStats> stats;
  try {
    stats = spectral_stats(sys);
  } catch (const std::exception&) {
    // Bound column stays empty when the gap is degenerate.
  }

  const std::filesystem::path dir = out_dir / figure_name(which);
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;

  RandomSource rng1 = RandomSource::derived(master_seed, 1);
  RunReport alg1 = run_algorithm1(sys, fp.alg1, rng1, fp.problem.truth_signs);
  if (stats)
    for (TracePoint& pt : alg1.trace)
      pt.bound = theorem_bound(*stats, pt.k, 1.0, sys.n);
  paths.push_back(write_trace_csv(
      alg1, dir / ("alg1_" + std::to_string(master_seed) + ".csv")));

  RandomSource rng2 = RandomSource::derived(master_seed, 2);
  const RunReport alg2 = run_algorithm2(sys, fp.alg2, rng2, fp.problem.truth_signs);
  paths.push_back(write_trace_csv(
      alg2, dir / ("alg2_" + std::to_string(master_seed) + ".csv")));

  return paths;
}

// ---------------------------------------------------------------------------
// Partial recovery
// ---------------------------------------------------------------------------

struct PartialRecovery {
  std::vector<std::pair<long long, double>> series;  // (k, agreement fraction)
  std::optional<long long> first_k_above_threshold;  // first k exceeding 51%
};

/// Agreement fraction max(#agree, n−#agree)/n per trace point, and the first
/// k where it exceeds 0.51.
inline PartialRecovery partial_recovery_curve(const RunReport& report,
                                              const SignVector& truth) {
  const double n = static_cast<double>(truth.size());
  PartialRecovery curve;
  for (const TracePoint& pt : report.trace) {
    if (!pt.mismatch) continue;
    const double fraction = (n - *pt.mismatch) / n;
    curve.series.emplace_back(pt.k, fraction);
    if (!curve.first_k_above_threshold && fraction > 0.51)
      curve.first_k_above_threshold = pt.k;
  }
  return curve;
}

}  // namespace eigensign
