// Command-line front end: instance generation, single algorithm runs,
// spectral diagnostics, and benchmark/figure ensembles.
//
// Exit codes: 0 success, 1 usage error, 2 runtime/numerical error,
// 3 non-recovery within budget (run subcommand only).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eigensign/eigensign.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitNotRecovered = 3;

std::string real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

int cmd_generate(const std::string& kind, std::size_t n, std::optional<double> lambda,
                 const std::string& law_name, std::uint64_t seed, const std::string& out) {
  using namespace eigensign;
  EigenPhaseProblem problem;
  if (kind == "planted") {
    if (n < 2) throw std::invalid_argument("generate: planted instances need --n >= 2");
    if (!lambda) throw std::invalid_argument("generate: planted instances need --lambda");
    MagnitudeLaw law;
    if (law_name == "unit") law = MagnitudeLaw::unit;
    else if (law_name == "folded-gaussian") law = MagnitudeLaw::folded_gaussian;
    else if (law_name == "decaying") law = MagnitudeLaw::decaying;
    else throw std::invalid_argument("generate: unknown --law " + law_name);
    RandomSource rng(seed);
    problem = planted_problem(n, *lambda, law, rng);
  } else if (kind == "hadamard-top") {
    problem = hadamard_perturbed(HadamardEnd::top);
  } else if (kind == "hadamard-bottom") {
    problem = hadamard_perturbed(HadamardEnd::bottom);
  } else if (kind == "gaussian") {
    RandomSource rng(seed);
    problem = gaussian_spiked(rng);
  } else {
    throw std::invalid_argument("generate: unknown --kind " + kind);
  }
  save_problem(problem, out);
  std::cout << "kind=" << kind << "\n";
  std::cout << "n=" << problem.n << "\n";
  std::cout << "lambda=" << real(problem.lambda) << "\n";
  std::cout << "out=" << out << "\n";
  return kExitOk;
}

int cmd_run(int alg, const std::string& problem_path, long long iters, std::uint64_t seed,
            double tol, const std::string& trace_path) {
  using namespace eigensign;
  const EigenPhaseProblem problem = load_problem(problem_path);
  const SignSystem sys = build_sign_system(problem);

  RunConfig cfg;
  cfg.max_iters = iters > 0 ? iters : default_max_iters(sys);
  cfg.success_tol = tol;
  RandomSource rng(seed);

  const RunReport report = alg == 1 ? run_algorithm1(sys, cfg, rng, problem.truth_signs)
                                    : run_algorithm2(sys, cfg, rng, problem.truth_signs);

  std::cout << "alg=" << alg << "\n";
  std::cout << "status="
            << (report.status == RunStatus::recovered ? "recovered" : "budget_exhausted")
            << "\n";
  std::cout << "iters=" << report.iters_used << "\n";
  std::cout << "max_iters=" << cfg.max_iters << "\n";
  if (problem.truth_signs)
    std::cout << "mismatch=" << mismatch_min(report.final_signs, *problem.truth_signs)
              << "\n";
  if (!trace_path.empty()) {
    write_trace_csv(report, trace_path);
    std::cout << "trace=" << trace_path << "\n";
  }
  return report.status == RunStatus::recovered ? kExitOk : kExitNotRecovered;
}

int cmd_spectrum(const std::string& problem_path) {
  using namespace eigensign;
  const EigenPhaseProblem problem = load_problem(problem_path);
  const SignSystem sys = build_sign_system(problem);
  const Vector sv = singular_values(sys.c);
  const double n = static_cast<double>(sys.n);
  std::cout << "n=" << sys.n << "\n";
  std::cout << "sigma_n=" << real(sv[sys.n - 1]) << "\n";
  if (sys.n >= 2) std::cout << "sigma_n_minus_1=" << real(sv[sys.n - 2]) << "\n";
  std::cout << "frob_sq=" << real(sys.frob_sq) << "\n";
  std::cout << "nlogn_floor=" << static_cast<long long>(std::ceil(n * std::log(n))) << "\n";
  const SpectralStats stats = spectral_stats(sys);  // throws on a degenerate gap
  std::cout << "contraction=" << real(stats.contraction) << "\n";
  std::cout << "predicted_iters=" << stats.predicted_iters << "\n";
  return kExitOk;
}

int cmd_bench(const std::string& figure, bool theorem, std::size_t n, int trials,
              long long iters, double lambda, const std::string& out_dir,
              std::uint64_t seed) {
  using namespace eigensign;
  if (theorem == !figure.empty())
    throw std::invalid_argument("bench: pass exactly one of --figure or --theorem");

  std::filesystem::create_directories(out_dir);
  if (!figure.empty()) {
    Figure which;
    if (figure == "fig1") which = Figure::fig1;
    else if (figure == "fig2") which = Figure::fig2;
    else if (figure == "fig3") which = Figure::fig3;
    else throw std::invalid_argument("bench: unknown --figure " + figure);
    const auto paths = reproduce_figure(which, out_dir, seed);
    for (const auto& p : paths) std::cout << "trace=" << p.string() << "\n";
    std::cout << "files=" << paths.size() << "\n";
    return kExitOk;
  }

  if (n < 2) throw std::invalid_argument("bench: --theorem needs --n >= 2");
  RandomSource gen = RandomSource::derived(seed, 0);
  const EigenPhaseProblem problem = planted_problem(n, lambda, MagnitudeLaw::unit, gen);
  RunConfig cfg;
  cfg.max_iters = iters;
  const EnsembleReport ensemble = monte_carlo_algorithm1(problem, trials, cfg, seed);

  const std::filesystem::path csv =
      std::filesystem::path(out_dir) / ("theorem_n" + std::to_string(n) + ".csv");
  std::ofstream out_file(csv);
  if (!out_file) throw std::runtime_error("bench: cannot open " + csv.string());
  out_file << "k,mean_weighted_obj,sem_weighted_obj,bound,mean_norm_sq,sem_norm_sq,"
              "norm_floor\n";
  bool display1_ok = true, display2_ok = true;
  for (std::size_t g = 0; g < ensemble.grid.size(); ++g) {
    out_file << ensemble.grid[g] << ',' << real(ensemble.mean_weighted_obj[g]) << ','
             << real(ensemble.sem_weighted_obj[g]) << ',' << real(ensemble.bound[g]) << ','
             << real(ensemble.mean_norm_sq[g]) << ',' << real(ensemble.sem_norm_sq[g]) << ','
             << real(ensemble.norm_floor) << '\n';
    if (ensemble.mean_weighted_obj[g] >
        ensemble.bound[g] + 3.0 * ensemble.sem_weighted_obj[g])
      display1_ok = false;
    if (ensemble.mean_norm_sq[g] < ensemble.norm_floor - 3.0 * ensemble.sem_norm_sq[g])
      display2_ok = false;
  }
  std::cout << "trials=" << ensemble.trials << "\n";
  std::cout << "recovery_rate=" << real(ensemble.recovery_rate) << "\n";
  std::cout << "weighted_obj_under_bound=" << (display1_ok ? "true" : "false") << "\n";
  std::cout << "norm_above_floor=" << (display2_ok ? "true" : "false") << "\n";
  std::cout << "csv=" << csv.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recovers eigenvector sign patterns from entrywise absolute values"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "Write a problem instance as JSON");
  std::string gen_kind;
  std::size_t gen_n = 16;
  double gen_lambda = 0.0;
  bool gen_lambda_set = false;
  std::string gen_law = "folded-gaussian";
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  generate->add_option("--kind", gen_kind, "planted|hadamard-top|hadamard-bottom|gaussian")
      ->required();
  generate->add_option("--n", gen_n, "dimension (planted only)");
  generate->add_option("--lambda", gen_lambda, "planted eigenvalue")
      ->each([&](const std::string&) { gen_lambda_set = true; });
  generate->add_option("--law", gen_law, "unit|folded-gaussian|decaying (planted only)");
  generate->add_option("--seed", gen_seed, "generator seed");
  generate->add_option("--out", gen_out, "output problem file")->required();

  // run
  auto* run = app.add_subcommand("run", "Run one algorithm on a problem file");
  int run_alg = 1;
  std::string run_problem;
  long long run_iters = 0;
  std::uint64_t run_seed = 0;
  double run_tol = 1e-8;
  std::string run_trace;
  run->add_option("--alg", run_alg, "1 (projection) or 2 (sign flips)")
      ->required()
      ->check(CLI::IsMember({1, 2}));
  run->add_option("--problem", run_problem, "problem JSON path")->required();
  run->add_option("--iters", run_iters, "iteration budget (default: spectral estimate)");
  run->add_option("--seed", run_seed, "run seed");
  run->add_option("--tol", run_tol, "success tolerance relative to ||C||_F");
  run->add_option("--trace", run_trace, "trace CSV output path");

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "Spectral diagnostics of a problem");
  std::string spec_problem;
  spectrum->add_option("--problem", spec_problem, "problem JSON path")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "Figure reproduction and bound ensembles");
  std::string bench_figure;
  bool bench_theorem = false;
  std::size_t bench_n = 32;
  int bench_trials = 200;
  long long bench_iters = 5000;
  double bench_lambda = 3.0;
  std::string bench_out;
  std::uint64_t bench_seed = 0;
  bench->add_option("--figure", bench_figure, "fig1|fig2|fig3");
  bench->add_flag("--theorem", bench_theorem, "run the bound-checking ensemble");
  bench->add_option("--n", bench_n, "ensemble dimension");
  bench->add_option("--trials", bench_trials, "ensemble trials");
  bench->add_option("--iters", bench_iters, "steps per trial");
  bench->add_option("--lambda", bench_lambda, "planted eigenvalue for the ensemble");
  bench->add_option("--out", bench_out, "output directory")->required();
  bench->add_option("--seed", bench_seed, "master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed())
      return cmd_generate(gen_kind, gen_n,
                          gen_lambda_set ? std::optional<double>(gen_lambda) : std::nullopt,
                          gen_law, gen_seed, gen_out);
    if (run->parsed())
      return cmd_run(run_alg, run_problem, run_iters, run_seed, run_tol, run_trace);
    if (spectrum->parsed()) return cmd_spectrum(spec_problem);
    if (bench->parsed())
      return cmd_bench(bench_figure, bench_theorem, bench_n, bench_trials, bench_iters,
                       bench_lambda, bench_out, bench_seed);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
