#include "orlicz/young.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace orlicz {

namespace {

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

YoungFunction YoungFunction::power(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw std::domain_error("power Young function needs p > 1");
  }
  return YoungFunction(YoungFamily::Power, p);
}

YoungFunction YoungFunction::power_log(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw std::domain_error("powerlog Young function needs p >= 1");
  }
  return YoungFunction(YoungFamily::PowerLog, p);
}

YoungFunction YoungFunction::exp_minus() {
  return YoungFunction(YoungFamily::ExpMinus, 1.0);
}

YoungFunction YoungFunction::parse(std::string_view spec) {
  if (spec == "expminus") return exp_minus();
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("unknown Young function '" + std::string(spec) + "'");
  }
  const auto head = spec.substr(0, colon);
  const double p = parse_double(spec.substr(colon + 1));
  if (head == "power") return power(p);
  if (head == "powerlog") return power_log(p);
  throw std::invalid_argument("unknown Young function '" + std::string(spec) + "'");
}

double YoungFunction::eval(double x) const {
  if (!std::isfinite(x)) throw std::domain_error("Young function argument must be finite");
  const double a = std::fabs(x);
  switch (family_) {
    case YoungFamily::Power:
      return p_ == 2.0 ? a * a : std::pow(a, p_);
    case YoungFamily::PowerLog:
      return std::pow(a, p_) * std::log(std::exp(1.0) + a);
    case YoungFamily::ExpMinus:
      return std::expm1(a) - a;
  }
  return 0.0;
}

double YoungFunction::inverse(double y) const {
  if (!(y >= 0.0)) throw std::domain_error("Young inverse needs y >= 0");
  if (std::isinf(y)) return std::numeric_limits<double>::infinity();
  return invert_increasing([this](double x) { return eval(x); }, y, 1e-13);
}

std::string YoungFunction::name() const {
  std::ostringstream out;
  switch (family_) {
    case YoungFamily::Power:
      out << "power:" << p_;
      break;
    case YoungFamily::PowerLog:
      out << "powerlog:" << p_;
      break;
    case YoungFamily::ExpMinus:
      out << "expminus";
      break;
  }
  return out.str();
}

double ComplementaryFunction::eval(double y) const {
  if (!std::isfinite(y)) throw std::domain_error("conjugate argument must be finite");
  const double a = std::fabs(y);
  if (a == 0.0) return 0.0;
  if (!numeric_only_ && phi_.family() == YoungFamily::Power) {
    const double p = phi_.exponent();
    // maximizer x* = (a/p)^{1/(p-1)}
    return (1.0 - 1.0 / p) * a * std::pow(a / p, 1.0 / (p - 1.0));
  }
  return eval_numeric(a);
}

double ComplementaryFunction::eval_numeric(double a) const {
  auto objective = [&](double x) {
    const double v = phi_.eval(x);
    return std::isfinite(v) ? x * a - v : -std::numeric_limits<double>::infinity();
  };

  double lo = 0.0;
  double hi = 1.0;
  while (objective(2.0 * hi) > objective(hi)) {
    lo = 0.5 * hi;
    hi *= 2.0;
    if (hi > 1e300) return std::numeric_limits<double>::infinity();
  }
  hi *= 2.0;

  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int it = 0; it < 300 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = objective(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = objective(x1);
    }
  }
  return std::max({0.0, f1, f2, objective(0.5 * (lo + hi))});
}

double ComplementaryFunction::inverse(double y) const {
  if (!(y >= 0.0)) throw std::domain_error("conjugate inverse needs y >= 0");
  return invert_increasing([this](double x) { return eval(x); }, y, 1e-13);
}

Delta2Certificate check_delta2(const YoungFunction& phi, double x0, double xmax,
                               int n_samples) {
  if (!(x0 > 0.0) || !(xmax > x0) || !std::isfinite(xmax) || n_samples < 2) {
    throw std::domain_error("check_delta2 needs 0 < x0 < xmax and n_samples >= 2");
  }
  if (xmax < 100.0 * x0) {
    throw std::domain_error("check_delta2 grid must span two decades");
  }

  auto ratio = [&](double x) {
    const double num = phi.eval(2.0 * x);
    const double den = phi.eval(x);
    if (!std::isfinite(num) || !std::isfinite(den) || den <= 0.0) {
      return std::numeric_limits<double>::infinity();
    }
    return num / den;
  };
  auto grid_max = [&](double a, double b) {
    double best = 0.0;
    const double span = std::log(b / a);
    for (int i = 0; i < n_samples; ++i) {
      const double x = a * std::exp(span * i / (n_samples - 1));
      best = std::max(best, ratio(x));
    }
    return best;
  };

  Delta2Certificate cert;
  cert.witness_k = grid_max(x0, xmax);
  cert.lower_decade_max = grid_max(xmax / 100.0, xmax / 10.0);
  cert.upper_decade_max = grid_max(xmax / 10.0, xmax);
  cert.holds = std::isfinite(cert.witness_k) && std::isfinite(cert.upper_decade_max) &&
               cert.upper_decade_max <= 1.05 * cert.lower_decade_max;
  return cert;
}

}  // namespace orlicz
