#include <doctest.h>

#include <omp.h>

#include <cstring>
#include <random>

#include "orlicz/kernels.hpp"
#include "support.hpp"

using namespace orlicz;

namespace {

bool bitwise_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

// Sums are combined in chunk order, so they agree with the plain loop only up
// to rounding; block averages use the same order and agree exactly.
TEST_CASE("parallel kernels match the serial reference") {
  for (int k : {3, 12, 16}) {
    CAPTURE(k);
    auto s = DyadicSpace::random(k, 99);
    const auto f = SimpleFunction::random(s, 5, -3.0, 3.0);
    const auto w = s->weights();

    CHECK(kernels::parallel::weighted_sum(f.values(), w) ==
          doctest::Approx(kernels::serial::weighted_sum(f.values(), w)).epsilon(1e-13));
    for (const auto& phi : oracle::families()) {
      CHECK(kernels::parallel::modular_sum(f.values(), w, phi, 0.8) ==
            doctest::Approx(kernels::serial::modular_sum(f.values(), w, phi, 0.8)).epsilon(1e-13));
    }
    if (s->cells() <= kernels::kChunk) {
      CHECK(bitwise_equal(kernels::serial::weighted_sum(f.values(), w),
                          kernels::parallel::weighted_sum(f.values(), w)));
    }

    std::mt19937_64 rng(k);
    for (int rep = 0; rep < 3; ++rep) {
      const auto p = rep == 0 ? Partition::random(s, 37, rng())
                              : Partition::random_intervals(s, 1 + rng() % s->cells(), rng());
      std::vector<double> a(s->cells()), b(s->cells());
      kernels::serial::block_average(f.values(), p, a);
      kernels::parallel::block_average(f.values(), p, b);
      CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
    }
  }
}

TEST_CASE("results do not depend on the thread count") {
  auto s = DyadicSpace::random(17, 4);
  const auto f = SimpleFunction::random(s, 6);
  const auto phi = YoungFunction::power_log(2.0);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const double m1 = kernels::parallel::modular_sum(f.values(), s->weights(), phi, 0.3);
  const double n1 = luxemburg_norm(f, phi);
  omp_set_num_threads(4);
  const double m4 = kernels::parallel::modular_sum(f.values(), s->weights(), phi, 0.3);
  const double n4 = luxemburg_norm(f, phi);
  omp_set_num_threads(saved);
  CHECK(bitwise_equal(m1, m4));
  CHECK(bitwise_equal(n1, n4));
}

TEST_CASE("modular sum skips null cells and saturates on overflow") {
  auto s = DyadicSpace::from_weights({0.5, 0.0, 0.5, 0.0});
  const auto f = SimpleFunction::from_values(s, {1.0, 1e300, 2.0, 0.0});
  const auto phi = YoungFunction::power(2.0);
  CHECK(kernels::serial::modular_sum(f.values(), s->weights(), phi, 1.0) == doctest::Approx(2.5));
  const auto big = SimpleFunction::from_values(s, {1e300, 0.0, 0.0, 0.0});
  CHECK(std::isinf(kernels::serial::modular_sum(big.values(), s->weights(), phi, 1e-10)));
}

TEST_CASE("block average on zero-measure blocks") {
  auto s = DyadicSpace::from_weights({0.0, 0.0, 1.0, 3.0});
  const auto f = SimpleFunction::from_values(s, {5.0, 7.0, 1.0, 2.0});
  const auto p = Partition::dyadic(s, 2);
  std::vector<double> out(4);
  kernels::serial::block_average(f.values(), p, out);
  CHECK(out[0] == 0.0);
  CHECK(out[1] == 0.0);
  CHECK(out[2] == doctest::Approx(1.75));
  CHECK(out[3] == doctest::Approx(1.75));
}
