#pragma once

#include <string>
#include <string_view>

namespace orlicz {

enum class YoungFamily { Power, PowerLog, ExpMinus };

/// An even convex gauge with phi(0) = 0 and phi(x)/x -> infinity.
///
/// Three parametric families are supported:
///   power:p      |x|^p                       (p > 1)
///   powerlog:p   |x|^p * ln(e + |x|)         (p >= 1)
///   expminus     e^|x| - 1 - |x|
///
/// Values are immutable; every member is pure.
class YoungFunction {
 public:
  static YoungFunction power(double p);
  static YoungFunction power_log(double p);
  static YoungFunction exp_minus();

  /// Parses "power:2", "powerlog:1.5", "expminus".
  static YoungFunction parse(std::string_view spec);

  double operator()(double x) const { return eval(x); }
  double eval(double x) const;

  /// Unique x >= 0 with eval(x) == y, by bracket doubling and bisection.
  double inverse(double y) const;

  YoungFamily family() const { return family_; }
  double exponent() const { return p_; }
  std::string name() const;

  friend bool operator==(const YoungFunction&, const YoungFunction&) = default;

 private:
  YoungFunction(YoungFamily family, double p) : family_(family), p_(p) {}

  YoungFamily family_;
  double p_;
};

/// psi(y) = sup_{x >= 0} (x|y| - phi(x)).
///
/// Evaluated lazily. The power family has a closed form; everything else
/// (or everything, when `numeric_only` is set) goes through a golden-section
/// maximization of the concave inner objective.
class ComplementaryFunction {
 public:
  explicit ComplementaryFunction(YoungFunction phi, bool numeric_only = false)
      : phi_(phi), numeric_only_(numeric_only) {}

  double operator()(double y) const { return eval(y); }
  double eval(double y) const;

  /// Smallest x >= 0 with psi(x) == y.
  double inverse(double y) const;

  const YoungFunction& primal() const { return phi_; }

 private:
  double eval_numeric(double a) const;

  YoungFunction phi_;
  bool numeric_only_;
};

inline ComplementaryFunction complementary(const YoungFunction& phi) {
  return ComplementaryFunction(phi);
}

struct Delta2Certificate {
  bool holds = false;
  double witness_k = 0.0;
  double lower_decade_max = 0.0;
  double upper_decade_max = 0.0;
};

/// Numerical Delta_2 certificate: max of phi(2x)/phi(x) on a geometric grid
/// over [x0, xmax], accepted when the maximum over the top decade is within
/// 5% of the maximum over the decade below it.
Delta2Certificate check_delta2(const YoungFunction& phi, double x0 = 1.0,
                               double xmax = 1e3, int n_samples = 301);

/// Inverse of a continuous nondecreasing f on [0, inf) with f(0) = 0.
/// Returns the smallest x with f(x) >= y to relative tolerance `rel_tol`.
template <class F>
double invert_increasing(const F& f, double y, double rel_tol = 1e-12) {
  if (y <= 0.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (f(hi) < y) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) return hi;
  }
  for (int it = 0; it < 400 && hi - lo > rel_tol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace orlicz
