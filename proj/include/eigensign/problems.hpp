#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "eigensign/numkit.hpp"
#include "eigensign/random.hpp"

namespace eigensign {

/// Entries are ±1; the global sign is quotiented out by convention, with the
/// canonical representative having first entry +1.
using SignVector = std::vector<int>;

inline SignVector canonical_signs(SignVector s) {
  if (!s.empty() && s.front() < 0)
    for (auto& x : s) x = -x;
  return s;
}

enum class MagnitudeLaw { unit, folded_gaussian, decaying };
enum class HadamardEnd { top, bottom };

/// A sign-recovery instance: matrix A, a known simple eigenvalue λ, the
/// entrywise magnitudes |x_i| of the corresponding eigenvector, and (for
/// generated instances) the hidden true signs ε.
struct EigenPhaseProblem {
  std::size_t n = 0;
  DenseMatrix a;
  double lambda = 0.0;
  Vector magnitudes;
  std::optional<SignVector> truth_signs;

  /// The eigenvector ε ⊙ m reconstructed from the ground truth.
  Vector truth_vector() const {
    if (!truth_signs)
      throw std::logic_error("truth_vector: instance has no ground-truth signs");
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = (*truth_signs)[i] * magnitudes[i];
    return x;
  }

  /// Checks every structural invariant; throws std::invalid_argument on the
  /// first violation.
  void validate() const {
    if (n == 0) throw std::invalid_argument("problem: n must be positive");
    if (a.rows() != n || a.cols() != n)
      throw std::invalid_argument("problem: matrix shape does not match n");
    if (!a.all_finite()) throw std::invalid_argument("problem: matrix has non-finite entries");
    if (!std::isfinite(lambda)) throw std::invalid_argument("problem: lambda is not finite");
    if (magnitudes.size() != n)
      throw std::invalid_argument("problem: magnitudes length does not match n");
    for (double m : magnitudes)
      if (!(m > 0.0) || !std::isfinite(m))
        throw std::invalid_argument("problem: magnitudes must be strictly positive");
    if (truth_signs) {
      if (truth_signs->size() != n)
        throw std::invalid_argument("problem: truth_signs length does not match n");
      for (int s : *truth_signs)
        if (s != 1 && s != -1)
          throw std::invalid_argument("problem: truth_signs entries must be ±1");
      if (truth_signs->front() != 1)
        throw std::invalid_argument("problem: truth_signs must be canonicalized (first entry +1)");
      // Eigen-residual: A(ε⊙m) must equal λ(ε⊙m) up to rounding scale.
      const Vector x = truth_vector();
      Vector ax = matvec(a, x);
      double res_sq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = ax[i] - lambda * x[i];
        res_sq += d * d;
      }
      const double allowed = 1e-8 * std::sqrt(frobenius_sq(a)) * norm(magnitudes);
      if (std::sqrt(res_sq) > allowed)
        throw std::invalid_argument("problem: truth signs fail the eigen-residual check");
    }
  }
};

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// Synthetic instance with exact ground truth: A is assembled as
/// λ·xxᵀ/‖x‖² + P·M·P with P the projector onto x⊥ and M a random symmetric
/// bulk, so A·x = λ·x holds by construction. Draws whose sign system has a
/// near-degenerate spectral gap are rejected and redrawn.
inline EigenPhaseProblem planted_problem(std::size_t n, double lambda, MagnitudeLaw law,
                                         RandomSource& rng) {
  if (n < 2) throw std::invalid_argument("planted_problem: n must be at least 2");

  SignVector signs(n);
  for (auto& s : signs) s = rng.rademacher();
  signs = canonical_signs(std::move(signs));

  Vector magnitudes(n);
  for (std::size_t i = 0; i < n; ++i) {
    switch (law) {
      case MagnitudeLaw::unit: magnitudes[i] = 1.0; break;
      case MagnitudeLaw::folded_gaussian: magnitudes[i] = std::abs(rng.normal()) + 0.1; break;
      case MagnitudeLaw::decaying:
        magnitudes[i] = std::pow(2.0, -static_cast<double>(i + 1) / 4.0) + 0.05;
        break;
    }
  }

  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = signs[i] * magnitudes[i];
  const double xn2 = norm_sq(x);

  const int max_retries = 10;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    DenseMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.normal();
    DenseMatrix bulk(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) bulk(i, j) = 0.5 * (g(i, j) + g(j, i));

    // P M P = M - x uᵀ - u xᵀ + β xxᵀ with u = Mx/‖x‖², β = xᵀMx/‖x‖⁴.
    Vector u = matvec(bulk, x);
    for (auto& e : u) e /= xn2;
    const double beta = dot(x, u) / xn2;

    EigenPhaseProblem problem;
    problem.n = n;
    problem.lambda = lambda;
    problem.magnitudes = magnitudes;
    problem.truth_signs = signs;
    problem.a = DenseMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        problem.a(i, j) = lambda * x[i] * x[j] / xn2 + bulk(i, j) - x[i] * u[j] -
                          u[i] * x[j] + beta * x[i] * x[j];

    // Reject draws with a near-degenerate gap in C = D⁻¹AD − λI.
    DenseMatrix c(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        c(i, j) = problem.a(i, j) * magnitudes[j] / magnitudes[i] -
                  (i == j ? lambda : 0.0);
    const Vector sv = singular_values(c);
    const double fnorm = std::sqrt(frobenius_sq(c));
    if (sv[n - 2] > 1e-6 * fnorm) {
      problem.validate();
      return problem;
    }
  }
  throw std::runtime_error("planted_problem: degenerate instance after retries");
}

/// Sylvester-Hadamard matrix; order must be a power of two.
inline DenseMatrix sylvester_hadamard(std::size_t order) {
  if (order == 0 || (order & (order - 1)) != 0)
    throw std::invalid_argument("sylvester_hadamard: order must be a power of two");
  DenseMatrix h(order, order);
  h(0, 0) = 1.0;
  for (std::size_t block = 1; block < order; block *= 2) {
    for (std::size_t i = 0; i < block; ++i) {
      for (std::size_t j = 0; j < block; ++j) {
        const double v = h(i, j);
        h(i, j + block) = v;
        h(i + block, j) = v;
        h(i + block, j + block) = -v;
      }
    }
  }
  return h;
}

/// The 256×256 Hadamard experiment: A = H/16 (spectrum ±1) perturbed by
/// A₁₁ = 2. `top` targets the large positive outlier via power iteration,
/// `bottom` the small-magnitude outlier via inverse iteration with shift 0.
inline EigenPhaseProblem hadamard_perturbed(HadamardEnd which) {
  constexpr std::size_t kOrder = 256;
  DenseMatrix a = sylvester_hadamard(kOrder);
  for (auto& e : a.entries()) e /= 16.0;
  a(0, 0) = 2.0;

  RandomSource rng(0x48414441u);  // fixed start vector keeps the instance deterministic
  const EigenPair pair = which == HadamardEnd::top
                             ? power_iteration(a, 1e-12, 10000, rng)
                             : inverse_iteration(a, 0.0, 1e-12, 10000, rng);

  EigenPhaseProblem problem;
  problem.n = kOrder;
  problem.a = std::move(a);
  problem.lambda = pair.value;
  problem.magnitudes.resize(kOrder);
  SignVector signs(kOrder);
  for (std::size_t i = 0; i < kOrder; ++i) {
    problem.magnitudes[i] = std::abs(pair.vector[i]);
    signs[i] = pair.vector[i] < 0.0 ? -1 : 1;
  }
  problem.truth_signs = canonical_signs(std::move(signs));
  problem.validate();
  return problem;
}

/// The 100×100 random experiment: symmetrized i.i.d. Gaussian matrix with its
/// leading entry replaced by 50, paired with its top eigenvector.
inline EigenPhaseProblem gaussian_spiked(RandomSource& rng) {
  constexpr std::size_t kDim = 100;
  DenseMatrix g(kDim, kDim);
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j) g(i, j) = rng.normal();
  DenseMatrix a(kDim, kDim);
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = i; j < kDim; ++j) {
      const double v = g(i, j) + g(j, i);
      a(i, j) = v;
      a(j, i) = v;
    }
  a(0, 0) = 50.0;

  const EigenPair pair = power_iteration(a, 1e-12, 10000, rng);

  EigenPhaseProblem problem;
  problem.n = kDim;
  problem.a = std::move(a);
  problem.lambda = pair.value;
  problem.magnitudes.resize(kDim);
  SignVector signs(kDim);
  for (std::size_t i = 0; i < kDim; ++i) {
    problem.magnitudes[i] = std::abs(pair.vector[i]);
    signs[i] = pair.vector[i] < 0.0 ? -1 : 1;
  }
  problem.truth_signs = canonical_signs(std::move(signs));
  problem.validate();
  return problem;
}

/// Removes coordinates whose magnitude is negligible relative to the largest,
/// deleting the matching rows and columns of A.
inline EigenPhaseProblem strip_zero_magnitudes(const EigenPhaseProblem& p) {
  double max_mag = 0.0;
  for (double m : p.magnitudes) max_mag = std::max(max_mag, m);
  const double threshold = 1e-12 * max_mag;

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < p.n; ++i)
    if (p.magnitudes[i] > threshold) keep.push_back(i);
  if (keep.empty())
    throw std::runtime_error("strip_zero_magnitudes: all magnitudes are zero");

  EigenPhaseProblem out;
  out.n = keep.size();
  out.lambda = p.lambda;
  out.a = DenseMatrix(out.n, out.n);
  out.magnitudes.resize(out.n);
  for (std::size_t i = 0; i < out.n; ++i) {
    out.magnitudes[i] = p.magnitudes[keep[i]];
    for (std::size_t j = 0; j < out.n; ++j) out.a(i, j) = p.a(keep[i], keep[j]);
  }
  if (p.truth_signs) {
    SignVector signs(out.n);
    for (std::size_t i = 0; i < out.n; ++i) signs[i] = (*p.truth_signs)[keep[i]];
    out.truth_signs = canonical_signs(std::move(signs));
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON problem files
// ---------------------------------------------------------------------------
//
// Schema: { "n": int, "a": [n*n reals, row-major], "lambda": real,
//           "magnitudes": [n positive reals], "truth_signs": [±1]? }

inline void save_problem(const EigenPhaseProblem& p, const std::filesystem::path& path) {
  nlohmann::json j;
  j["n"] = p.n;
  j["a"] = p.a.entries();
  j["lambda"] = p.lambda;
  j["magnitudes"] = p.magnitudes;
  if (p.truth_signs) j["truth_signs"] = *p.truth_signs;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_problem: cannot open " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("save_problem: write failed for " + path.string());
}

inline EigenPhaseProblem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_problem: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("load_problem: malformed JSON in " + path.string() + ": " +
                             e.what());
  }
  EigenPhaseProblem p;
  try {
    p.n = j.at("n").get<std::size_t>();
    if (p.n == 0) throw std::invalid_argument("n must be positive");
    const auto entries = j.at("a").get<std::vector<double>>();
    if (entries.size() != p.n * p.n)
      throw std::invalid_argument("matrix entry count does not match n*n");
    p.a = DenseMatrix(p.n, p.n);
    p.a.entries() = entries;
    p.lambda = j.at("lambda").get<double>();
    p.magnitudes = j.at("magnitudes").get<Vector>();
    if (j.contains("truth_signs")) p.truth_signs = j.at("truth_signs").get<SignVector>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("load_problem: bad problem file " + path.string() + ": " +
                             e.what());
  }
  p.validate();
  return p;
}

}  // namespace eigensign
