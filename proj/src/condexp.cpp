#include "orlicz/condexp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace orlicz {

SimpleFunction cond_exp(const SimpleFunction& f, const Partition& p) {
  require_same_space(f.space(), p.space(), "cond_exp");
  std::vector<double> out(f.size());
  kernels::parallel::block_average(f.values(), p, out);
  return SimpleFunction::from_values(f.space(), std::move(out));
}

SimpleFunction orth_complement(const SimpleFunction& f, const Partition& p) {
  return f - cond_exp(f, p);
}

SimpleFunction quantize_levels(const SimpleFunction& g, int levels) {
  if (levels < 1) throw std::domain_error("quantize_levels needs N >= 1");
  const double n = static_cast<double>(levels);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = g[i];
    if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("quantize_levels needs 0 <= g <= 1");
    out[i] = std::floor(v * n) / n;
  }
  return SimpleFunction::from_values(g.space(), std::move(out));
}

double quantization_bound(const YoungFunction& phi, double total_measure, int levels) {
  return (phi(1.0) * total_measure + 1.0) / static_cast<double>(levels);
}

double tower_intersection_check(const SimpleFunction& f, const Partition& b,
                                const Partition& c) {
  require_same_space(b.space(), c.space(), "tower_intersection_check");
  const Partition bc = meet(b, c);
  const SimpleFunction nested = cond_exp(cond_exp(f, c), b);
  const SimpleFunction direct = cond_exp(f, bc);
  const auto w = f.space()->weights();
  double worst = 0.0;
  for (std::size_t d = 0; d < bc.block_count(); ++d) {
    double lhs = 0.0;
    double rhs = 0.0;
    for (auto i : bc.block(d)) {
      lhs += nested[i] * w[i];
      rhs += direct[i] * w[i];
    }
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  return worst;
}

}  // namespace orlicz
