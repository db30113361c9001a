#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "eigensign/harness.hpp"

using namespace eigensign;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    // Trailing empty cells are dropped by getline; pad to the header width.
    while (!rows.empty() && cells.size() < rows.front().size()) cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST_CASE("monte carlo requires ground truth") {
  RandomSource rng(71);
  EigenPhaseProblem p = planted_problem(8, 3.0, MagnitudeLaw::unit, rng);
  p.truth_signs.reset();
  RunConfig cfg;
  cfg.max_iters = 100;
  REQUIRE_THROWS_AS(monte_carlo_algorithm1(p, 10, cfg, 1), std::invalid_argument);
}

TEST_CASE("a single-trial ensemble reduces to one run") {
  RandomSource gen(72);
  const EigenPhaseProblem p = planted_problem(12, 3.0, MagnitudeLaw::unit, gen);
  RunConfig cfg;
  cfg.max_iters = 256;
  cfg.trace_stride = 16;

  const EnsembleReport ensemble = monte_carlo_algorithm1(p, 1, cfg, 99);

  const SignSystem sys = build_sign_system(p);
  RunConfig run_cfg = cfg;
  run_cfg.early_stop = false;
  RandomSource rng = RandomSource::derived(99, 0);
  const RunReport report = run_algorithm1(sys, run_cfg, rng, p.truth_signs);

  REQUIRE(ensemble.grid.size() == report.trace.size());
  for (std::size_t g = 0; g < ensemble.grid.size(); ++g) {
    REQUIRE(ensemble.grid[g] == report.trace[g].k);
    REQUIRE_THAT(ensemble.mean_weighted_obj[g],
                 WithinAbs(*report.trace[g].weighted_obj, 1e-12));
    REQUIRE_THAT(ensemble.mean_norm_sq[g], WithinAbs(report.trace[g].norm_sq, 1e-12));
  }
}

TEST_CASE("ensembles are reproducible from the master seed") {
  RandomSource gen(73);
  const EigenPhaseProblem p = planted_problem(10, 3.0, MagnitudeLaw::unit, gen);
  RunConfig cfg;
  cfg.max_iters = 200;
  const EnsembleReport a = monte_carlo_algorithm1(p, 20, cfg, 1234);
  const EnsembleReport b = monte_carlo_algorithm1(p, 20, cfg, 1234);
  REQUIRE(a.grid == b.grid);
  REQUIRE(a.mean_weighted_obj == b.mean_weighted_obj);
  REQUIRE(a.mean_norm_sq == b.mean_norm_sq);
  REQUIRE(a.recovery_rate == b.recovery_rate);
}

TEST_CASE("trace CSV layout") {
  RunReport report;
  const auto dir = std::filesystem::temp_directory_path();

  // Empty trace: header only.
  const auto empty_path = write_trace_csv(report, dir / "eigensign_empty.csv");
  auto rows = parse_csv(empty_path);
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0] ==
          std::vector<std::string>{"k", "norm_sq", "mismatch", "weighted_obj", "bound"});

  TracePoint full;
  full.k = 3;
  full.norm_sq = 0.125;
  full.mismatch = 2;
  full.weighted_obj = 0.25;
  full.bound = 1.0 / 3.0;
  TracePoint sparse;
  sparse.k = 5;
  sparse.norm_sq = 1.0 / 7.0;
  report.trace = {full, sparse};
  const auto path = write_trace_csv(report, dir / "eigensign_trace.csv");
  rows = parse_csv(path);
  REQUIRE(rows.size() == 3);
  // Full row round-trips every value at 17 significant digits.
  REQUIRE(std::stoll(rows[1][0]) == 3);
  REQUIRE(std::stod(rows[1][1]) == 0.125);
  REQUIRE(std::stoi(rows[1][2]) == 2);
  REQUIRE(std::stod(rows[1][3]) == 0.25);
  REQUIRE(std::stod(rows[1][4]) == 1.0 / 3.0);
  // Absent fields stay empty.
  REQUIRE(std::stod(rows[2][1]) == 1.0 / 7.0);
  REQUIRE(rows[2][2].empty());
  REQUIRE(rows[2][3].empty());
  REQUIRE(rows[2][4].empty());

  std::filesystem::remove(empty_path);
  std::filesystem::remove(path);
}

TEST_CASE("partial recovery curve") {
  RunReport report;
  for (long long k = 0; k <= 4; ++k) {
    TracePoint pt;
    pt.k = k * 10;
    pt.norm_sq = 1.0;
    pt.mismatch = static_cast<int>(8 - 2 * k);  // n = 16: fractions 0.5 .. 1.0
    report.trace.push_back(pt);
  }
  const SignVector truth(16, 1);
  const PartialRecovery curve = partial_recovery_curve(report, truth);
  REQUIRE(curve.series.size() == 5);
  REQUIRE_THAT(curve.series.front().second, WithinAbs(0.5, 1e-15));
  REQUIRE_THAT(curve.series.back().second, WithinAbs(1.0, 1e-15));
  REQUIRE(curve.first_k_above_threshold.has_value());
  REQUIRE(*curve.first_k_above_threshold == 10);  // fraction 0.625 > 0.51
}

TEST_CASE("random initial signs sit near half agreement") {
  RandomSource gen(74);
  const EigenPhaseProblem p = planted_problem(64, 4.0, MagnitudeLaw::unit, gen);
  const SignSystem sys = build_sign_system(p);
  RunConfig cfg;
  cfg.max_iters = 1;
  cfg.early_stop = false;
  double sum_initial = 0.0;
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    RandomSource rng = RandomSource::derived(75, t);
    const RunReport report = run_algorithm2(sys, cfg, rng, p.truth_signs);
    const PartialRecovery curve = partial_recovery_curve(report, *p.truth_signs);
    sum_initial += curve.series.front().second;
  }
  // max(#agree, n-#agree)/n for random signs: 1/2 + Θ(n^{-1/2}) in expectation.
  REQUIRE_THAT(sum_initial / trials, WithinAbs(0.55, 0.05));
}

TEST_CASE("figure reproduction writes one trace per algorithm") {
  const auto out = std::filesystem::temp_directory_path() / "eigensign_figs";
  std::filesystem::remove_all(out);
  const auto paths = reproduce_figure(Figure::fig3, out, 5);
  REQUIRE(paths.size() == 2);
  REQUIRE(paths[0].filename() == "alg1_5.csv");
  REQUIRE(paths[1].filename() == "alg2_5.csv");
  for (const auto& p : paths) REQUIRE(std::filesystem::exists(p));

  // The projection trace carries the contraction bound; check one row.
  const auto rows = parse_csv(paths[0]);
  REQUIRE(rows.size() >= 2);
  REQUIRE_FALSE(rows[1][4].empty());
  std::filesystem::remove_all(out);
}
