#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "orlicz/kernels.hpp"
#include "orlicz/measure.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

/// A function constant on every grid cell: one finite real per cell.
class SimpleFunction {
 public:
  static SimpleFunction zero(SpaceHandle space);
  static SimpleFunction constant(SpaceHandle space, double c);
  /// f(x) = x sampled at cell midpoints.
  static SimpleFunction identity(SpaceHandle space);
  static SimpleFunction indicator(const MeasurableSet& set);
  static SimpleFunction random(SpaceHandle space, std::uint64_t seed, double lo = -1.0,
                               double hi = 1.0);
  static SimpleFunction from_values(SpaceHandle space, std::vector<double> values);

  /// Generator names: "zero", "identity", "constant:c", "indicator:a,b",
  /// "random:seed".
  static SimpleFunction parse(std::string_view spec, SpaceHandle space);

  const SpaceHandle& space() const { return space_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double sup_norm() const;
  /// True when f vanishes on every cell of positive weight.
  bool is_null() const;

  SimpleFunction& operator+=(const SimpleFunction& other);
  SimpleFunction& operator-=(const SimpleFunction& other);
  SimpleFunction& operator*=(double c);

  friend SimpleFunction operator+(SimpleFunction a, const SimpleFunction& b) { return a += b; }
  friend SimpleFunction operator-(SimpleFunction a, const SimpleFunction& b) { return a -= b; }
  friend SimpleFunction operator*(double c, SimpleFunction f) { return f *= c; }

 private:
  SimpleFunction(SpaceHandle space, std::vector<double> values);

  SpaceHandle space_;
  std::vector<double> values_;
};

/// Pointwise product.
SimpleFunction multiply(const SimpleFunction& f, const SimpleFunction& g);
/// Pointwise gauge(f).
template <class Gauge>
SimpleFunction compose(const Gauge& gauge, const SimpleFunction& f) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = gauge(f[i]);
  return SimpleFunction::from_values(f.space(), std::move(out));
}

double integrate(const SimpleFunction& f);

/// Integral of gauge(|f| / k).
template <class Gauge>
double modular(const SimpleFunction& f, const Gauge& gauge, double k) {
  if (!(k > 0.0)) throw std::domain_error("modular needs k > 0");
  return kernels::parallel::modular_sum(f.values(), f.space()->weights(), gauge, k);
}

namespace detail {

// Smallest k with modular(k) <= 1, given a strictly decreasing modular.
// Returns the feasible end of the final bracket so the unit-ball property
// holds exactly.
template <class Modular>
double solve_unit_modular(const Modular& modular_at, double tol) {
  double lo = 1.0;
  double hi = 1.0;
  if (modular_at(1.0) > 1.0) {
    hi = 2.0;
    while (modular_at(hi) > 1.0) {
      lo = hi;
      hi *= 2.0;
    }
  } else {
    lo = 0.5;
    while (!(modular_at(lo) > 1.0)) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-300) return hi;
    }
  }
  for (int it = 0; it < 400 && hi - lo > tol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (modular_at(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace detail

/// Luxemburg norm inf{k > 0 : integral of gauge(|f|/k) <= 1}, to relative
/// tolerance `tol`. The zero function (mod null cells) has norm 0.
template <class Gauge>
double luxemburg_norm(const SimpleFunction& f, const Gauge& gauge, double tol = 1e-12) {
  if (!(tol > 0.0)) throw std::domain_error("luxemburg_norm needs tol > 0");
  if (f.is_null()) return 0.0;
  const auto values = f.values();
  const auto weights = f.space()->weights();
  return detail::solve_unit_modular(
      [&](double k) { return kernels::parallel::modular_sum(values, weights, gauge, k); }, tol);
}

/// Luxemburg norm of any function whose |f| takes value magnitudes[j] on a
/// set of measure masses[j]. The norm depends only on this distribution.
template <class Gauge>
double luxemburg_norm_of_distribution(std::span<const double> magnitudes,
                                      std::span<const double> masses, const Gauge& gauge,
                                      double tol = 1e-12) {
  bool null = true;
  for (std::size_t j = 0; j < magnitudes.size(); ++j) {
    if (magnitudes[j] != 0.0 && masses[j] > 0.0) null = false;
  }
  if (null) return 0.0;
  return detail::solve_unit_modular(
      [&](double k) { return kernels::serial::modular_sum(magnitudes, masses, gauge, k); }, tol);
}

struct HolderCheck {
  double pairing = 0.0;
  double bound = 0.0;
  bool holds = true;
};

/// Integral of f g against 2 N_phi(f) N_psi(g), psi the complementary function.
HolderCheck holder_pairing(const SimpleFunction& f, const SimpleFunction& g,
                           const YoungFunction& phi);

struct JensenCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

/// phi(mean of f) against mean of phi(f), means taken over mu(Omega).
JensenCheck jensen_gap(const SimpleFunction& f, const YoungFunction& phi);

}  // namespace orlicz
