#include <catch2/catch_amalgamated.hpp>

#include "eigensign/random.hpp"

using eigensign::RandomSource;

TEST_CASE("identical seeds give identical streams") {
  RandomSource a(42), b(42);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.uniform() == b.uniform());
  RandomSource c(42), d(43);
  bool all_equal = true;
  for (int i = 0; i < 16; ++i) all_equal = all_equal && (c.next_u64() == d.next_u64());
  REQUIRE_FALSE(all_equal);
}

TEST_CASE("derived streams are decorrelated from the master") {
  RandomSource a = RandomSource::derived(7, 0);
  RandomSource b = RandomSource::derived(7, 1);
  REQUIRE(a.next_u64() != b.next_u64());
  // Deterministic given (master, stream).
  RandomSource c = RandomSource::derived(7, 1);
  c.next_u64();
  REQUIRE(b.next_u64() == c.next_u64());
}

TEST_CASE("uniform stays in [0,1) with roughly the right mean") {
  RandomSource rng(1);
  double sum = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  REQUIRE_THAT(sum / draws, Catch::Matchers::WithinAbs(0.5, 0.01));
}

TEST_CASE("normal has mean 0 and variance 1") {
  RandomSource rng(2);
  double sum = 0.0, sum_sq = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const double x = rng.normal();
    sum += x;
    sum_sq += x * x;
  }
  REQUIRE_THAT(sum / draws, Catch::Matchers::WithinAbs(0.0, 0.02));
  REQUIRE_THAT(sum_sq / draws, Catch::Matchers::WithinAbs(1.0, 0.03));
}

TEST_CASE("unit vectors have norm one") {
  RandomSource rng(3);
  for (std::size_t dim : {1u, 2u, 50u}) {
    const auto v = rng.unit_vector(dim);
    double nrm_sq = 0.0;
    for (double x : v) nrm_sq += x * x;
    REQUIRE_THAT(nrm_sq, Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
  REQUIRE_THROWS_AS(rng.unit_vector(0), std::invalid_argument);
}
