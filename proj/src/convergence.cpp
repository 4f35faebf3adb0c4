#include "orlicz/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "orlicz/condexp.hpp"

namespace orlicz {

// --- sequences --------------------------------------------------------------

AlgebraSequence::AlgebraSequence(Kind kind, std::vector<Partition> window, std::size_t period)
    : kind_(kind), window_(std::move(window)), period_(period) {
  if (window_.size() < 4) throw std::domain_error("sequence window must hold at least 4 entries");
  for (const auto& p : window_) require_same_space(window_.front().space(), p.space(), "sequence");
}

AlgebraSequence AlgebraSequence::dyadic_refinement(SpaceHandle space, std::vector<int> exponents,
                                                   std::size_t window) {
  if (exponents.empty()) throw std::domain_error("dyadic refinement needs exponents");
  std::vector<Partition> parts;
  parts.reserve(window);
  for (std::size_t n = 0; n < window; ++n) {
    const int j = std::clamp(exponents[std::min(n, exponents.size() - 1)], 0, space->resolution());
    parts.push_back(Partition::dyadic(space, std::size_t{1} << j));
  }
  return AlgebraSequence(Kind::DyadicRefinement, std::move(parts), 1);
}

AlgebraSequence AlgebraSequence::refining(SpaceHandle space, std::size_t window, int start,
                                          int step) {
  if (step < 1) throw std::domain_error("refining step must be >= 1");
  std::vector<int> exponents(window);
  for (std::size_t n = 0; n < window; ++n) {
    exponents[n] = std::min(start + static_cast<int>(n) / step, space->resolution());
  }
  return dyadic_refinement(std::move(space), std::move(exponents), window);
}

AlgebraSequence AlgebraSequence::periodic(std::vector<Partition> cycle, std::size_t window,
                                          std::vector<Partition> prefix) {
  if (cycle.empty()) throw std::domain_error("periodic sequence needs a nonempty cycle");
  std::vector<Partition> parts;
  parts.reserve(window);
  for (std::size_t n = 0; n < window; ++n) {
    parts.push_back(n < prefix.size() ? prefix[n] : cycle[(n - prefix.size()) % cycle.size()]);
  }
  return AlgebraSequence(Kind::Periodic, std::move(parts), cycle.size());
}

AlgebraSequence AlgebraSequence::constant(Partition p, std::size_t window) {
  return periodic({std::move(p)}, window);
}

AlgebraSequence AlgebraSequence::explicit_list(std::vector<Partition> partitions) {
  return AlgebraSequence(Kind::Explicit, std::move(partitions), 1);
}

void require_delta2(const YoungFunction& phi) {
  const auto cert = check_delta2(phi);
  if (!cert.holds) {
    throw Delta2Required("Young function " + phi.name() +
                         " has no Delta_2 certificate; weak convergence tests need it");
  }
}

// --- reports ----------------------------------------------------------------

double tail_max(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const auto first = values.begin() + static_cast<std::ptrdiff_t>(tail_begin(values.size()));
  return *std::max_element(first, values.end());
}

const Trace* ConvergenceReport::find(const std::string& metric) const {
  for (const auto& t : traces) {
    if (t.metric == metric) return &t;
  }
  return nullptr;
}

double ConvergenceReport::tail_max(const std::string& metric) const {
  const Trace* t = find(metric);
  if (!t) throw std::out_of_range("no trace named " + metric);
  return orlicz::tail_max(t->values);
}

bool ConvergenceReport::all_checks_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const NamedCheck& c) { return c.passed; });
}

void ConvergenceReport::merge(const ConvergenceReport& other) {
  traces.insert(traces.end(), other.traces.begin(), other.traces.end());
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  if (other.mu) mu = other.mu;
  if (other.perp) perp = other.perp;
  if (other.muperp) muperp = other.muperp;
  tol = std::max(tol, other.tol);
}

void ConvergenceReport::write_csv_rows(std::ostream& out) const {
  std::ostringstream buf;
  buf << std::setprecision(15);
  for (const auto& t : traces) {
    for (std::size_t n = 0; n < t.values.size(); ++n) {
      buf << n << ',' << t.metric << ',' << t.values[n] << '\n';
    }
  }
  out << buf.str();
}

namespace {

const char* flag(const std::optional<bool>& v) {
  if (!v) return "na";
  return *v ? "true" : "false";
}

}  // namespace

std::string ConvergenceReport::verdict_line() const {
  std::ostringstream out;
  out << "VERDICT mu=" << flag(mu) << " perp=" << flag(perp) << " muperp=" << flag(muperp);
  return out.str();
}

// --- mu-convergence ---------------------------------------------------------

namespace {

struct Overlap {
  double mass = 0.0;
  std::size_t cells = 0;
};

// Distance from every target block to its best approximation by unions of
// P-blocks, in one pass over the cells.
std::vector<double> approximation_distances(const Partition& p, const Partition& target) {
  const auto w = p.space()->weights();
  const auto nt = static_cast<std::uint64_t>(target.block_count());
  std::unordered_map<std::uint64_t, Overlap> overlaps;
  overlaps.reserve(p.block_count() + target.block_count());
  for (std::size_t i = 0; i < p.cells(); ++i) {
    const auto key = static_cast<std::uint64_t>(p.label(i)) * nt +
                     static_cast<std::uint64_t>(target.label(i));
    auto& o = overlaps[key];
    o.mass += w[i];
    ++o.cells;
  }
  std::vector<double> dist(target.block_count(), 0.0);
  for (const auto& [key, o] : overlaps) {
    const auto pb = static_cast<std::size_t>(key / nt);
    const auto tb = static_cast<std::size_t>(key % nt);
    const double inside = o.mass;
    const double outside =
        o.cells == p.block(pb).size() ? 0.0 : std::max(0.0, p.block_measure(pb) - inside);
    dist[tb] += inside > outside ? outside : inside;
  }
  return dist;
}

}  // namespace

ConvergenceReport mu_convergence_test(const AlgebraSequence& seq, const Partition& target,
                                      double tol, const YoungFunction& phi) {
  require_same_space(seq.space(), target.space(), "mu_convergence_test");
  const std::size_t len = seq.window_length();
  const std::size_t nb = target.block_count();
  const bool per_block = nb <= 8;

  std::vector<std::vector<double>> dist(nb, std::vector<double>(len, 0.0));
  std::vector<std::vector<double>> norm(nb, std::vector<double>(len, 0.0));
  std::vector<double> dist_max(len, 0.0);
  std::vector<double> norm_max(len, 0.0);
  const double one = 1.0;
  for (std::size_t n = 0; n < len; ++n) {
    const auto d = approximation_distances(seq[n], target);
    for (std::size_t b = 0; b < nb; ++b) {
      dist[b][n] = d[b];
      // |chi_A - chi_D| is the indicator of A delta D.
      norm[b][n] = luxemburg_norm_of_distribution(std::span(&one, 1), std::span(&d[b], 1), phi);
      dist_max[n] = std::max(dist_max[n], d[b]);
      norm_max[n] = std::max(norm_max[n], norm[b][n]);
    }
  }

  ConvergenceReport report;
  report.tol = tol;
  report.traces.push_back({"mu_distance_max", dist_max});
  report.traces.push_back({"mu_orlicz_max", norm_max});
  if (per_block) {
    for (std::size_t b = 0; b < nb; ++b) {
      report.traces.push_back({"mu_distance[" + std::to_string(b) + "]", dist[b]});
      report.traces.push_back({"mu_orlicz[" + std::to_string(b) + "]", norm[b]});
    }
  }
  const bool set_side = tail_max(dist_max) < tol;
  // Norm of an indicator of a set of measure tol.
  const double orlicz_tol = 1.0 / phi.inverse(1.0 / tol);
  const bool orlicz_side = tail_max(norm_max) < orlicz_tol;
  report.mu = set_side;
  std::ostringstream detail;
  detail << "distance verdict " << set_side << ", Orlicz verdict " << orlicz_side
         << " (norm tolerance " << orlicz_tol << ")";
  report.checks.push_back({"mu_orlicz_equivalence", set_side == orlicz_side, detail.str()});
  return report;
}

// --- perp-convergence -------------------------------------------------------

std::vector<std::vector<double>> weak_pairing_trace(const AlgebraSequence& seq,
                                                    const Partition& d_target,
                                                    const SimpleFunction* f,
                                                    const std::vector<SimpleFunction>& battery,
                                                    const YoungFunction& phi, PairingMode mode) {
  require_delta2(phi);
  require_same_space(seq.space(), d_target.space(), "weak_pairing_trace");
  if (mode == PairingMode::Function && f == nullptr) {
    throw std::invalid_argument("function-mode pairing needs f");
  }
  const auto space = seq.space();
  const auto w = space->weights();
  const std::size_t len = seq.window_length();
  std::vector<std::vector<double>> out(battery.size(), std::vector<double>(len, 0.0));

  for (std::size_t gi = 0; gi < battery.size(); ++gi) {
    const auto& g = battery[gi];
    require_same_space(space, g.space(), "weak_pairing_trace");
    // The pairing is linear in the mask: the block contributions are the
    // block integrals of E^perp_D(g).
    const SimpleFunction g_perp = orth_complement(g, d_target);
    for (std::size_t n = 0; n < len; ++n) {
      const Partition& p = seq[n];
      SimpleFunction u = SimpleFunction::zero(space);
      if (mode == PairingMode::Set) {
        std::vector<double> contrib(p.block_count(), 0.0);
        for (std::size_t i = 0; i < p.cells(); ++i) {
          contrib[static_cast<std::size_t>(p.label(i))] += g_perp[i] * w[i];
        }
        double pos = 0.0;
        double neg = 0.0;
        for (double c : contrib) (c > 0.0 ? pos : neg) += c;
        const bool take_positive = pos >= -neg;
        std::vector<std::uint8_t> mask(p.cells(), 0);
        for (std::size_t i = 0; i < p.cells(); ++i) {
          const double c = contrib[static_cast<std::size_t>(p.label(i))];
          mask[i] = take_positive ? (c > 0.0) : (c < 0.0);
        }
        u = SimpleFunction::indicator(MeasurableSet::from_mask(space, std::move(mask)));
      } else {
        u = cond_exp(*f, p);
      }
      out[gi][n] = integrate(multiply(orth_complement(u, d_target), g));
    }
  }
  return out;
}

std::vector<SimpleFunction> default_dual_battery(const AlgebraSequence& seq, std::size_t size,
                                                 std::uint64_t seed) {
  const auto& window = seq.window();
  Partition tail_join = window[tail_begin(window.size())];
  for (std::size_t n = tail_begin(window.size()) + 1; n < window.size(); ++n) {
    tail_join = join(tail_join, window[n]);
  }
  std::vector<SimpleFunction> battery;
  battery.reserve(size);
  const std::size_t indicators = std::min(size / 2, tail_join.block_count());
  for (std::size_t b = 0; b < indicators; ++b) {
    battery.push_back(SimpleFunction::indicator(tail_join.block_set(b)));
  }
  for (std::uint64_t k = 0; battery.size() < size; ++k) {
    battery.push_back(SimpleFunction::random(seq.space(), seed * 7919 + k));
  }
  return battery;
}

namespace {

Partition two_block(const MeasurableSet& set) {
  std::vector<int> labels(set.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = set.contains(i) ? 1 : 0;
  return Partition::from_labels(set.space(), labels);
}

}  // namespace

PerpAlgebraEstimate estimate_perp_algebra(const AlgebraSequence& seq) {
  const auto& window = seq.window();
  const std::size_t first = tail_begin(window.size());
  const std::size_t period = std::max<std::size_t>(1, seq.period());
  const auto space = seq.space();
  constexpr double kLevels[] = {0.25, 0.5, 0.75};

  std::set<std::vector<std::uint8_t>> seen;
  std::vector<MeasurableSet> generators;
  for (std::size_t r = 0; r < period; ++r) {
    std::vector<const Partition*> cls;
    for (std::size_t n = first; n < window.size(); ++n) {
      if (n % period == r) cls.push_back(&window[n]);
    }
    if (cls.empty()) continue;
    Partition groups = *cls.front();
    for (const auto* p : cls) groups = join(groups, *p);

    for (std::size_t gb = 0; gb < groups.block_count(); ++gb) {
      const auto rep = groups.block(gb).front();
      // Cesaro average over the class of the indicator of the block holding rep.
      std::vector<double> avg(space->cells(), 0.0);
      for (const auto* p : cls) {
        const int l = p->label(rep);
        for (auto i : p->block(static_cast<std::size_t>(l))) avg[i] += 1.0;
      }
      for (auto& a : avg) a /= static_cast<double>(cls.size());
      for (double level : kLevels) {
        std::vector<std::uint8_t> mask(space->cells());
        std::size_t count = 0;
        for (std::size_t i = 0; i < mask.size(); ++i) {
          mask[i] = avg[i] > level ? 1 : 0;
          count += mask[i];
        }
        if (count == 0 || count == mask.size()) continue;
        if (seen.insert(mask).second) {
          generators.push_back(MeasurableSet::from_mask(space, std::move(mask)));
        }
      }
    }
  }

  Partition algebra = Partition::trivial(space);
  for (const auto& g : generators) algebra = join(algebra, two_block(g));
  return {std::move(algebra), std::move(generators)};
}

Partition estimate_mu_algebra(const AlgebraSequence& seq) {
  const auto& window = seq.window();
  Partition acc = window[tail_begin(window.size())];
  for (std::size_t n = tail_begin(window.size()) + 1; n < window.size(); ++n) {
    acc = meet(acc, window[n]);
  }
  return acc;
}

ConvergenceReport perp_convergence_test(const AlgebraSequence& seq, const Partition& d_target,
                                        const std::vector<SimpleFunction>& battery,
                                        const YoungFunction& phi, double tol) {
  const auto pairings =
      weak_pairing_trace(seq, d_target, nullptr, battery, phi, PairingMode::Set);
  const std::size_t len = seq.window_length();
  std::vector<double> worst(len, 0.0);
  for (const auto& trace : pairings) {
    for (std::size_t n = 0; n < len; ++n) worst[n] = std::max(worst[n], std::fabs(trace[n]));
  }

  ConvergenceReport report;
  report.tol = tol;
  report.traces.push_back({"perp_pairing_max", worst});
  for (std::size_t gi = 0; gi < std::min<std::size_t>(pairings.size(), 4); ++gi) {
    report.traces.push_back({"perp_pairing[" + std::to_string(gi) + "]", pairings[gi]});
  }
  report.perp = tail_max(worst) < tol;

  const auto estimate = estimate_perp_algebra(seq);
  const Partition lower = lower_limit(seq.window());
  const Partition upper = upper_limit(seq.window());
  const bool sandwiched = estimate.algebra.refines(lower) && upper.refines(estimate.algebra);
  std::ostringstream detail;
  detail << "A_perp estimate has " << estimate.algebra.block_count() << " atoms; lower "
         << lower.block_count() << ", upper " << upper.block_count();
  report.checks.push_back({"perp_sandwich", sandwiched, detail.str()});
  return report;
}

// --- conditional-expectation convergence ------------------------------------

ConvergenceReport condexp_convergence_test(const SimpleFunction& f, const AlgebraSequence& seq,
                                           const Partition& d_target, const YoungFunction& phi,
                                           double tol) {
  require_delta2(phi);
  require_same_space(seq.space(), d_target.space(), "condexp_convergence_test");
  require_same_space(seq.space(), f.space(), "condexp_convergence_test");
  const SimpleFunction limit = cond_exp(f, d_target);
  std::vector<double> trace(seq.window_length());
  for (std::size_t n = 0; n < trace.size(); ++n) {
    trace[n] = luxemburg_norm(cond_exp(f, seq[n]) - limit, phi);
  }
  ConvergenceReport report;
  report.tol = tol;
  report.muperp = tail_max(trace) < tol;
  report.traces.push_back({"condexp_norm", std::move(trace)});
  return report;
}

std::vector<SimpleFunction> default_function_battery(const Partition& target,
                                                     std::size_t random_count,
                                                     std::uint64_t seed) {
  std::vector<SimpleFunction> fs;
  for (std::size_t b = 0; b < std::min<std::size_t>(target.block_count(), 8); ++b) {
    fs.push_back(SimpleFunction::indicator(target.block_set(b)));
  }
  fs.push_back(SimpleFunction::identity(target.space()));
  for (std::size_t k = 0; k < random_count; ++k) {
    fs.push_back(SimpleFunction::random(target.space(), seed * 104729 + k));
  }
  return fs;
}

ConvergenceReport condexp_battery_test(const std::vector<SimpleFunction>& fs,
                                       const AlgebraSequence& seq, const Partition& d_target,
                                       const YoungFunction& phi, double tol) {
  ConvergenceReport report;
  report.tol = tol;
  std::vector<double> worst(seq.window_length(), 0.0);
  bool all = true;
  for (std::size_t k = 0; k < fs.size(); ++k) {
    auto single = condexp_convergence_test(fs[k], seq, d_target, phi, tol);
    all = all && *single.muperp;
    const auto& values = single.traces.front().values;
    for (std::size_t n = 0; n < worst.size(); ++n) worst[n] = std::max(worst[n], values[n]);
    if (k < 4) report.traces.push_back({"condexp_norm[" + std::to_string(k) + "]", values});
  }
  report.traces.insert(report.traces.begin(), Trace{"condexp_norm_max", worst});
  report.muperp = all;
  return report;
}

// --- proof-step checks ------------------------------------------------------

BoundTrace indicator_bound_check(const AlgebraSequence& seq, const MeasurableSet& d,
                                 const YoungFunction& phi) {
  require_same_space(seq.space(), d.space(), "indicator_bound_check");
  const std::size_t len = seq.window_length();
  BoundTrace out;
  out.lhs.assign(len, 0.0);
  out.rhs.assign(len, 0.0);
  out.evaluated.assign(len, 0);
  const SimpleFunction chi = SimpleFunction::indicator(d);
  for (std::size_t n = 0; n < len; ++n) {
    const double gap = symm_diff_measure(best_approx(seq[n], d), d);
    if (!(gap > 0.0)) continue;
    out.lhs[n] = luxemburg_norm(cond_exp(chi, seq[n]) - chi, phi);
    out.rhs[n] = 2.0 / phi.inverse(1.0 / (2.0 * gap));
    out.evaluated[n] = 1;
    out.max_violation = std::max(out.max_violation, out.lhs[n] - out.rhs[n]);
  }
  return out;
}

BoundTrace set_recovery_check(const AlgebraSequence& seq, const MeasurableSet& d,
                              const YoungFunction&) {
  require_same_space(seq.space(), d.space(), "set_recovery_check");
  const std::size_t len = seq.window_length();
  const auto space = seq.space();
  BoundTrace out;
  out.lhs.assign(len, 0.0);
  out.rhs.assign(len, 0.0);
  out.evaluated.assign(len, 1);
  const SimpleFunction chi = SimpleFunction::indicator(d);
  for (std::size_t n = 0; n < len; ++n) {
    const SimpleFunction e = cond_exp(chi, seq[n]);
    std::vector<std::uint8_t> mask(e.size());
    std::vector<double> gap(e.size());
    for (std::size_t i = 0; i < mask.size(); ++i) {
      mask[i] = e[i] > 0.5 ? 1 : 0;
      gap[i] = std::fabs(e[i] - chi[i]);
    }
    const auto recovered = MeasurableSet::from_mask(space, std::move(mask));
    out.lhs[n] = 0.5 * symm_diff_measure(recovered, d);
    out.rhs[n] = integrate(SimpleFunction::from_values(space, std::move(gap)));
    out.max_violation = std::max(out.max_violation, out.lhs[n] - out.rhs[n]);
  }
  return out;
}

// --- limit algebras ---------------------------------------------------------

SandwichReport sandwich_check(const AlgebraSequence& seq, double tol, std::size_t m_max) {
  SandwichReport r{lower_limit(seq.window(), m_max), upper_limit(seq.window(), m_max),
                   estimate_mu_algebra(seq), estimate_perp_algebra(seq)};

  r.lower_blocks_in_amu = true;
  for (std::size_t b = 0; b < r.lower.block_count(); ++b) {
    if (!amu_member(seq.window(), r.lower.block_set(b), tol).member) {
      r.lower_blocks_in_amu = false;
      break;
    }
  }
  r.perp_generators_upper_measurable =
      std::all_of(r.perp_estimate.generators.begin(), r.perp_estimate.generators.end(),
                  [&](const MeasurableSet& g) { return r.upper.is_measurable(g); });
  const auto& aperp = r.perp_estimate.algebra;
  r.chain_ordered = r.mu_estimate.refines(r.lower) && aperp.refines(r.mu_estimate) &&
                    r.upper.refines(aperp);
  r.muperp = r.mu_estimate == aperp;
  r.all_equal = r.lower == r.mu_estimate && r.mu_estimate == aperp && aperp == r.upper;
  return r;
}

Analysis analyze(const AlgebraSequence& seq, const Partition& target, const YoungFunction& phi,
                 const AnalysisOptions& options) {
  require_delta2(phi);
  auto mu_report = mu_convergence_test(seq, target, options.tol, phi);
  const auto dual = default_dual_battery(seq, options.dual_battery_size, options.seed);
  auto perp_report = perp_convergence_test(seq, target, dual, phi, options.tol);
  const auto fs = default_function_battery(target, options.random_functions, options.seed + 1000);
  auto condexp_report = condexp_battery_test(fs, seq, target, phi, options.tol);
  auto sandwich = sandwich_check(seq, options.tol);

  const bool equivalent = *condexp_report.muperp == (*mu_report.mu && *perp_report.perp);
  const double margin = condexp_report.tail_max("condexp_norm_max");
  return Analysis{std::move(mu_report), std::move(perp_report), std::move(condexp_report),
                  std::move(sandwich), equivalent, margin};
}

}  // namespace orlicz
