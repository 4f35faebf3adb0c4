#pragma once

// Brute-force oracles and random generators shared by the test binaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "orlicz/condexp.hpp"
#include "orlicz/convergence.hpp"
#include "orlicz/function.hpp"
#include "orlicz/measure.hpp"
#include "orlicz/young.hpp"

namespace oracle {

using namespace orlicz;

inline std::vector<YoungFunction> families() {
  return {YoungFunction::power(2.0), YoungFunction::power_log(1.5), YoungFunction::exp_minus()};
}

inline std::vector<YoungFunction> delta2_families() {
  return {YoungFunction::power(2.0), YoungFunction::power(1.5), YoungFunction::power(3.0),
          YoungFunction::power_log(1.0), YoungFunction::power_log(2.0)};
}

// sup over a fine grid of x y - phi(x); upper end chosen past the maximizer.
inline double grid_conjugate(const YoungFunction& phi, double y, int n = 200000) {
  double xmax = 1.0;
  while (phi(xmax) < xmax * y + 1.0) xmax *= 2.0;
  double best = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = xmax * i / n;
    best = std::max(best, x * y - phi(x));
  }
  return best;
}

// Join by pairs of labels, canonicalized by first occurrence.
inline std::vector<int> brute_join(const Partition& p, const Partition& q) {
  std::map<std::pair<int, int>, int> ids;
  std::vector<int> out(p.cells());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto key = std::make_pair(p.label(i), q.label(i));
    auto it = ids.find(key);
    if (it == ids.end()) it = ids.emplace(key, static_cast<int>(ids.size())).first;
    out[i] = it->second;
  }
  return out;
}

// Meet by quadratic fixpoint: cells sharing a block of either partition are
// merged until nothing changes.
inline std::vector<int> brute_meet(const Partition& p, const Partition& q) {
  const std::size_t n = p.cells();
  std::vector<int> comp(n);
  for (std::size_t i = 0; i < n; ++i) comp[i] = static_cast<int>(i);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if ((p.label(i) == p.label(j) || q.label(i) == q.label(j)) && comp[i] != comp[j]) {
          const int m = std::min(comp[i], comp[j]);
          comp[i] = comp[j] = m;
          changed = true;
        }
      }
    }
  }
  std::map<int, int> ids;
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = ids.find(comp[i]);
    if (it == ids.end()) it = ids.emplace(comp[i], static_cast<int>(ids.size())).first;
    out[i] = it->second;
  }
  return out;
}

inline MeasurableSet union_of_blocks(const Partition& p, std::uint64_t choice) {
  std::vector<std::uint8_t> mask(p.cells());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask[i] = (choice >> p.label(i)) & 1u;
  }
  return MeasurableSet::from_mask(p.space(), std::move(mask));
}

// Smallest mu(A delta target) over all unions A of P-blocks.
inline double exhaustive_best_distance(const Partition& p, const MeasurableSet& target) {
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << p.block_count()); ++c) {
    best = std::min(best, symm_diff_measure(union_of_blocks(p, c), target));
  }
  return best;
}

inline MeasurableSet random_set(const SpaceHandle& space, std::mt19937_64& rng,
                                double density = 0.5) {
  std::bernoulli_distribution coin(density);
  std::vector<std::uint8_t> mask(space->cells());
  for (auto& m : mask) m = coin(rng) ? 1 : 0;
  return MeasurableSet::from_mask(space, std::move(mask));
}

inline Partition random_partition(const SpaceHandle& space, std::mt19937_64& rng,
                                  std::size_t max_blocks = 8) {
  std::uniform_int_distribution<std::size_t> blocks(1, max_blocks);
  const auto m = std::min<std::size_t>(blocks(rng), space->cells());
  return (rng() & 1) ? Partition::random(space, m, rng())
                     : Partition::random_intervals(space, m, rng());
}

inline double l2_norm(const SimpleFunction& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * f[i] * f.space()->weight(i);
  return std::sqrt(s);
}

}  // namespace oracle
