#pragma once

// Per-cell reductions behind integrals, modulars and block averages.
//
// `serial` holds the plain reference loops. `parallel` holds the OpenMP
// versions used by the library: sums are split into fixed-size chunks whose
// partial results are combined in chunk order, so the answer does not depend
// on the thread count. Below one chunk both variants run the same loop.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "orlicz/measure.hpp"

namespace orlicz::kernels {

inline constexpr std::size_t kChunk = 4096;

namespace detail {

template <class Gauge>
inline double gauge_at(const Gauge& gauge, double x) {
  return std::isfinite(x) ? gauge(x) : std::numeric_limits<double>::infinity();
}

}  // namespace detail

namespace serial {

double weighted_sum(std::span<const double> values, std::span<const double> weights);

/// sum_i gauge(|v_i| / k) w_i
template <class Gauge>
double modular_sum(std::span<const double> values, std::span<const double> weights,
                   const Gauge& gauge, double k) {
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (weights[i] == 0.0 || values[i] == 0.0) continue;
    sum += detail::gauge_at(gauge, std::fabs(values[i]) / k) * weights[i];
  }
  return sum;
}

/// Writes the weighted block mean of `values` into every cell of `out`;
/// blocks of zero measure get 0.
void block_average(std::span<const double> values, const Partition& partition,
                   std::span<double> out);

}  // namespace serial

namespace parallel {

double weighted_sum(std::span<const double> values, std::span<const double> weights);

template <class Gauge>
double modular_sum(std::span<const double> values, std::span<const double> weights,
                   const Gauge& gauge, double k) {
  const std::size_t n = values.size();
  if (n <= kChunk) return serial::modular_sum(values, weights, gauge, k);
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    const std::size_t len = std::min(kChunk, n - begin);
    partial[static_cast<std::size_t>(c)] =
        serial::modular_sum(values.subspan(begin, len), weights.subspan(begin, len), gauge, k);
  }
  double sum = 0.0;
  for (double p : partial) sum += p;
  return sum;
}

void block_average(std::span<const double> values, const Partition& partition,
                   std::span<double> out);

}  // namespace parallel

}  // namespace orlicz::kernels
