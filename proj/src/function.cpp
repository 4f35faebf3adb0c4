#include "orlicz/function.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <string>

namespace orlicz {

namespace {

double parse_number(std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

SimpleFunction::SimpleFunction(SpaceHandle space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != space_->cells()) throw std::domain_error("function length must equal 2^K");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::domain_error("function values must be finite");
  }
}

SimpleFunction SimpleFunction::zero(SpaceHandle space) { return constant(std::move(space), 0.0); }

SimpleFunction SimpleFunction::constant(SpaceHandle space, double c) {
  const auto n = space->cells();
  return SimpleFunction(std::move(space), std::vector<double>(n, c));
}

SimpleFunction SimpleFunction::identity(SpaceHandle space) {
  std::vector<double> v(space->cells());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = space->midpoint(i);
  return SimpleFunction(std::move(space), std::move(v));
}

SimpleFunction SimpleFunction::indicator(const MeasurableSet& set) {
  std::vector<double> v(set.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = set.contains(i) ? 1.0 : 0.0;
  return SimpleFunction(set.space(), std::move(v));
}

SimpleFunction SimpleFunction::random(SpaceHandle space, std::uint64_t seed, double lo,
                                      double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(space->cells());
  for (auto& x : v) x = dist(rng);
  return SimpleFunction(std::move(space), std::move(v));
}

SimpleFunction SimpleFunction::from_values(SpaceHandle space, std::vector<double> values) {
  return SimpleFunction(std::move(space), std::move(values));
}

SimpleFunction SimpleFunction::parse(std::string_view spec, SpaceHandle space) {
  if (spec == "zero") return zero(std::move(space));
  if (spec == "identity") return identity(std::move(space));
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("unknown function '" + std::string(spec) + "'");
  }
  const auto head = spec.substr(0, colon);
  const auto args = spec.substr(colon + 1);
  if (head == "constant") return constant(std::move(space), parse_number(args));
  if (head == "random") {
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(args.data(), args.data() + args.size(), seed);
    if (ec != std::errc{} || ptr != args.data() + args.size()) {
      throw std::invalid_argument("bad seed in '" + std::string(spec) + "'");
    }
    return random(std::move(space), seed);
  }
  if (head == "indicator") {
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) {
      throw std::invalid_argument("indicator needs 'indicator:a,b'");
    }
    const double a = parse_number(args.substr(0, comma));
    const double b = parse_number(args.substr(comma + 1));
    return indicator(MeasurableSet::interval(std::move(space), a, b));
  }
  throw std::invalid_argument("unknown function '" + std::string(spec) + "'");
}

double SimpleFunction::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::fabs(v));
  return m;
}

bool SimpleFunction::is_null() const {
  const auto w = space_->weights();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] != 0.0 && w[i] > 0.0) return false;
  }
  return true;
}

SimpleFunction& SimpleFunction::operator+=(const SimpleFunction& other) {
  require_same_space(space_, other.space_, "operator+");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

SimpleFunction& SimpleFunction::operator-=(const SimpleFunction& other) {
  require_same_space(space_, other.space_, "operator-");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

SimpleFunction& SimpleFunction::operator*=(double c) {
  if (!std::isfinite(c)) throw std::domain_error("scalar must be finite");
  for (auto& v : values_) v *= c;
  return *this;
}

SimpleFunction multiply(const SimpleFunction& f, const SimpleFunction& g) {
  require_same_space(f.space(), g.space(), "multiply");
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f[i] * g[i];
  return SimpleFunction::from_values(f.space(), std::move(out));
}

double integrate(const SimpleFunction& f) {
  return kernels::parallel::weighted_sum(f.values(), f.space()->weights());
}

HolderCheck holder_pairing(const SimpleFunction& f, const SimpleFunction& g,
                           const YoungFunction& phi) {
  require_same_space(f.space(), g.space(), "holder_pairing");
  HolderCheck out;
  out.pairing = integrate(multiply(f, g));
  out.bound = 2.0 * luxemburg_norm(f, phi) * luxemburg_norm(g, complementary(phi));
  out.holds = std::fabs(out.pairing) <= out.bound * (1.0 + 1e-12) + 1e-15;
  return out;
}

JensenCheck jensen_gap(const SimpleFunction& f, const YoungFunction& phi) {
  const double total = f.space()->total();
  JensenCheck out;
  out.lhs = phi(integrate(f) / total);
  out.rhs = integrate(compose(phi, f)) / total;
  out.holds = out.lhs <= out.rhs + 1e-12 * std::max(1.0, std::fabs(out.rhs));
  return out;
}

}  // namespace orlicz
