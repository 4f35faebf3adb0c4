#pragma once

#include "orlicz/function.hpp"
#include "orlicz/measure.hpp"

namespace orlicz {

/// E(f | P): the weighted mean of f over each block, spread over the block.
/// Blocks of zero measure get 0.
SimpleFunction cond_exp(const SimpleFunction& f, const Partition& p);

/// f - E(f | P).
SimpleFunction orth_complement(const SimpleFunction& f, const Partition& p);

/// Floors each value of a [0, 1]-valued g onto the grid {0, 1/N, ..., 1}.
SimpleFunction quantize_levels(const SimpleFunction& g, int levels);

/// (phi(1) mu(Omega) + 1) / N, the norm bound on g - quantize_levels(g, N).
double quantization_bound(const YoungFunction& phi, double total_measure, int levels);

/// Largest |int_D E(E(f|C)|B) - int_D E(f|B meet C)| over the blocks D of
/// meet(B, C).
double tower_intersection_check(const SimpleFunction& f, const Partition& b,
                                const Partition& c);

}  // namespace orlicz
