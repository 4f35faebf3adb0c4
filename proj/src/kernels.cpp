#include "orlicz/kernels.hpp"

#include <algorithm>

namespace orlicz::kernels {

namespace serial {

double weighted_sum(std::span<const double> values, std::span<const double> weights) {
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += values[i] * weights[i];
  return sum;
}

void block_average(std::span<const double> values, const Partition& partition,
                   std::span<double> out) {
  const auto w = partition.space()->weights();
  std::vector<double> mass(partition.block_count(), 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    mass[static_cast<std::size_t>(partition.label(i))] += values[i] * w[i];
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto b = static_cast<std::size_t>(partition.label(i));
    const double m = partition.block_measure(b);
    out[i] = m > 0.0 ? mass[b] / m : 0.0;
  }
}

}  // namespace serial

namespace parallel {

double weighted_sum(std::span<const double> values, std::span<const double> weights) {
  const std::size_t n = values.size();
  if (n <= kChunk) return serial::weighted_sum(values, weights);
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    const std::size_t len = std::min(kChunk, n - begin);
    partial[static_cast<std::size_t>(c)] =
        serial::weighted_sum(values.subspan(begin, len), weights.subspan(begin, len));
  }
  double sum = 0.0;
  for (double p : partial) sum += p;
  return sum;
}

// Blocks are summed independently in ascending cell order, which is the same
// order the serial loop uses, so both variants agree bit for bit.
void block_average(std::span<const double> values, const Partition& partition,
                   std::span<double> out) {
  if (values.size() <= kChunk) {
    serial::block_average(values, partition, out);
    return;
  }
  const auto w = partition.space()->weights();
  const auto blocks = static_cast<std::ptrdiff_t>(partition.block_count());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const auto cells = partition.block(static_cast<std::size_t>(b));
    double mass = 0.0;
    for (auto i : cells) mass += values[i] * w[i];
    const double m = partition.block_measure(static_cast<std::size_t>(b));
    const double avg = m > 0.0 ? mass / m : 0.0;
    for (auto i : cells) out[i] = avg;
  }
}

}  // namespace parallel

}  // namespace orlicz::kernels
