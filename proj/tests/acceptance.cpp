// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "orlicz/scenario.hpp"
#include "support.hpp"

using namespace orlicz;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail) {
  std::printf("%s  %2d  %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

void criterion1() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  auto space = DyadicSpace::uniform(10);
  double worst = 0.0;
  int cases = 0;
  for (const auto& phi : oracle::families()) {
    for (int i = 0; i < 200; ++i) {
      std::uniform_real_distribution<double> density(0.001, 1.0);
      auto a = oracle::random_set(space, rng, density(rng));
      if (a.count() == 0) a = MeasurableSet::interval(space, 0.0, 0.01);
      const double n = luxemburg_norm(SimpleFunction::indicator(a), phi);
      worst = std::max(worst, std::fabs(n - 1.0 / phi.inverse(1.0 / mu(a))));
      ++cases;
    }
  }
  const double dt = seconds_since(t0);
  report(1, worst <= 1e-8 && dt < 5.0, "Luxemburg norm of indicators vs 1/phi^-1(1/mu(A))",
         fmt("%d cases over 3 families, max |err| = %.3g (limit 1e-8), %.2f s (limit 5 s)", cases,
             worst, dt));
}

void criterion2() {
  std::mt19937_64 rng(202);
  const auto phi = YoungFunction::power(2.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    auto space = (i % 2) ? DyadicSpace::random(8, rng()) : DyadicSpace::uniform(8);
    const auto f = SimpleFunction::random(space, rng(), -5.0, 5.0);
    worst = std::max(worst, std::fabs(luxemburg_norm(f, phi) - oracle::l2_norm(f)));
  }
  report(2, worst <= 1e-8, "Power(2) norm equals the L2 norm",
         fmt("200 functions, max |err| = %.3g (limit 1e-8)", worst));
}

void criterion3() {
  const auto t0 = Clock::now();
  const int k = 12;
  auto space = DyadicSpace::uniform(k);
  const auto trace =
      example_dyadic(SimpleFunction::identity(space), YoungFunction::power(2.0), 4096);
  const double dt = seconds_since(t0);

  double worst = 0.0, worst_grid = 0.0;
  std::size_t first_bad = 0;
  bool decreasing = true;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double n = static_cast<double>(trace[i].first);
    const double err = std::fabs(trace[i].second - 1.0 / (2.0 * std::sqrt(3.0) * n));
    if (err > 1e-6 && first_bad == 0) first_bad = trace[i].first;
    worst = std::max(worst, err);
    // Exact value for midpoint samples of x: sqrt((1/n^2 - 4^-K) / 12).
    const double grid = std::sqrt((1.0 / (n * n) - std::ldexp(1.0, -2 * k)) / 12.0);
    worst_grid = std::max(worst_grid, std::fabs(trace[i].second - grid));
    if (i > 0 && !(trace[i].second < trace[i - 1].second)) decreasing = false;
  }
  const double final_value = trace.back().second;
  const bool pass = worst <= 1e-6 && decreasing && final_value < 1e-3 && dt < 10.0;
  std::string detail = fmt(
      "max |err - 1/(2 sqrt3 n)| = %.3g (limit 1e-6)%s, strictly decreasing: %s, final %.3g, "
      "%.2f s; vs grid-exact sqrt((1/n^2 - 4^-K)/12): max |err| = %.3g",
      worst, first_bad ? fmt(", first exceeded at n=%zu", first_bad).c_str() : "",
      decreasing ? "yes" : "no", final_value, dt, worst_grid);
  report(3, pass, "Dyadic example reproduces 1/(2 sqrt3 n)", detail);
}

void criterion4() {
  std::mt19937_64 rng(404);
  double worst = -INFINITY;
  int evaluated = 0;
  const auto fams = oracle::families();
  for (int i = 0; i < 500; ++i) {
    auto space = DyadicSpace::random(7, rng());
    const auto p = oracle::random_partition(space, rng, 24);
    const auto d = oracle::random_set(space, rng, 0.2 + 0.6 * (i % 7) / 6.0);
    const auto& phi = fams[static_cast<std::size_t>(i) % fams.size()];
    const auto b = indicator_bound_check(AlgebraSequence::constant(p, 4), d, phi);
    if (b.evaluated[0]) ++evaluated;
    worst = std::max(worst, b.max_violation);
  }
  report(4, !(worst > 1e-9), "Indicator bound N(E(chi_D|A*) - chi_D) <= 2/phi^-1(1/(2 gap))",
         fmt("500 triples (%d with positive gap), max lhs - rhs = %.3g (limit 1e-9)", evaluated,
             worst));
}

void criterion5() {
  std::mt19937_64 rng(505);
  double worst = -INFINITY;
  for (int i = 0; i < 500; ++i) {
    auto space = DyadicSpace::random(7, rng());
    const auto p = oracle::random_partition(space, rng, 24);
    const auto d = oracle::random_set(space, rng);
    const auto b = set_recovery_check(AlgebraSequence::constant(p, 4), d, YoungFunction::power(2.0));
    worst = std::max(worst, b.max_violation);
  }
  report(5, worst <= 1e-12, "Set recovery (1/2) mu(A delta D) <= int |E(chi_D|A) - chi_D|",
         fmt("500 cases, max lhs - rhs = %.3g (limit 1e-12)", worst));
}

void criterion6() {
  std::mt19937_64 rng(606);
  double worst = -INFINITY;
  int cases = 0;
  for (const auto& phi : {YoungFunction::power(2.0), YoungFunction::power_log(2.0)}) {
    for (int levels : {1, 4, 16, 64}) {
      for (int i = 0; i < 100; ++i) {
        auto space = DyadicSpace::random(7, rng(), 0.5 + (i % 4));
        const auto p = oracle::random_partition(space, rng, 16);
        const auto g = cond_exp(SimpleFunction::random(space, rng(), 0.0, 1.0), p);
        const double lhs = luxemburg_norm(g - quantize_levels(g, levels), phi);
        worst = std::max(worst, lhs - quantization_bound(phi, space->total(), levels));
        ++cases;
      }
    }
  }
  report(6, worst <= 1e-9, "Quantization N(g - g_N) <= (phi(1) mu(Omega) + 1)/N",
         fmt("%d cases (power:2, powerlog:2; N = 1,4,16,64), max lhs - rhs = %.3g", cases, worst));
}

// Independent recomputation of the tower discrepancy with brute-force meet
// and explicit per-block sums.
double tower_oracle(const SimpleFunction& f, const Partition& b, const Partition& c) {
  const auto space = f.space();
  const auto labels = oracle::brute_meet(b, c);
  const auto w = space->weights();
  auto block_mean = [&](const std::vector<double>& v, const Partition& p) {
    std::vector<double> num(p.block_count(), 0.0), den(p.block_count(), 0.0), out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      num[static_cast<std::size_t>(p.label(i))] += v[i] * w[i];
      den[static_cast<std::size_t>(p.label(i))] += w[i];
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto l = static_cast<std::size_t>(p.label(i));
      out[i] = den[l] > 0.0 ? num[l] / den[l] : 0.0;
    }
    return out;
  };
  const std::vector<double> fv(f.values().begin(), f.values().end());
  const auto ecb = block_mean(block_mean(fv, c), b);
  const auto m = Partition::from_labels(space, labels);
  const auto em = block_mean(fv, m);
  double worst = 0.0;
  for (std::size_t d = 0; d < m.block_count(); ++d) {
    double lhs = 0.0, rhs = 0.0;
    for (auto i : m.block(d)) {
      lhs += ecb[i] * w[i];
      rhs += em[i] * w[i];
    }
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  return worst;
}

void criterion7() {
  std::mt19937_64 rng(707);
  double worst = 0.0, worst_oracle = 0.0;
  bool meets_agree = true;
  for (int i = 0; i < 200; ++i) {
    auto space = DyadicSpace::random(6, rng());
    const auto b = oracle::random_partition(space, rng, 12);
    const auto c = oracle::random_partition(space, rng, 12);
    const auto f = SimpleFunction::random(space, rng(), -2.0, 2.0);
    worst = std::max(worst, tower_intersection_check(f, b, c));
    worst_oracle = std::max(worst_oracle, tower_oracle(f, b, c));
    meets_agree = meets_agree && meet(b, c) == Partition::from_labels(space, oracle::brute_meet(b, c));
  }
  report(7, worst <= 1e-12 && worst_oracle <= 1e-12 && meets_agree,
         "Tower property on B meet C",
         fmt("200 triples at K=6, max discrepancy %.3g (oracle %.3g, limit 1e-12), meet matches "
             "brute force: %s",
             worst, worst_oracle, meets_agree ? "yes" : "no"));
}

void criterion8() {
  std::mt19937_64 rng(808);
  double worst_modular = -INFINITY, worst_norm = -INFINITY;
  const auto fams = oracle::families();
  for (int i = 0; i < 500; ++i) {
    auto space = DyadicSpace::random(7, rng());
    const auto p = oracle::random_partition(space, rng, 24);
    const auto f = SimpleFunction::random(space, rng(), -3.0, 3.0);
    const auto& phi = fams[static_cast<std::size_t>(i) % fams.size()];
    const auto e = cond_exp(f, p);
    const double me = integrate(compose(phi, e)), mf = integrate(compose(phi, f));
    worst_modular = std::max(worst_modular, (me - mf) / std::max(1.0, mf));
    worst_norm = std::max(worst_norm, luxemburg_norm(e, phi) - luxemburg_norm(f, phi));
  }
  report(8, worst_modular <= 1e-12 && worst_norm <= 1e-9, "Conditional Jensen contraction",
         fmt("500 cases, max relative modular excess %.3g, max norm excess %.3g (limit 1e-9)",
             worst_modular, worst_norm));
}

struct Case {
  std::string name;
  AlgebraSequence seq;
  enum { Refining, Constant, Periodic } kind;
  std::vector<Partition> cycle;
};

std::vector<Case> suite() {
  const std::size_t w = 64;
  auto u = DyadicSpace::uniform(6);
  auto r = DyadicSpace::random(6, 77);
  std::vector<Case> cases;
  cases.push_back({"refining uniform", AlgebraSequence::refining(u, w), Case::Refining, {}});
  cases.push_back({"refining step 3", AlgebraSequence::refining(u, w, 1, 3), Case::Refining, {}});
  cases.push_back({"refining random weights", AlgebraSequence::refining(r, w, 2), Case::Refining, {}});
  cases.push_back({"refining to 1/16",
                   AlgebraSequence::dyadic_refinement(r, {0, 1, 1, 2, 3, 4}, w), Case::Refining, {}});
  cases.push_back({"constant dyadic:8", AlgebraSequence::constant(Partition::dyadic(u, 8), w),
                   Case::Constant, {}});
  cases.push_back({"constant trivial", AlgebraSequence::constant(Partition::trivial(r), w),
                   Case::Constant, {}});
  cases.push_back({"constant random:5",
                   AlgebraSequence::constant(Partition::random(r, 5, 3), w), Case::Constant, {}});
  cases.push_back({"constant intervals:7",
                   AlgebraSequence::constant(Partition::random_intervals(u, 7, 4), w),
                   Case::Constant, {}});
  auto periodic = [&](std::string name, std::vector<Partition> cycle) {
    cases.push_back({std::move(name), AlgebraSequence::periodic(cycle, w), Case::Periodic, cycle});
  };
  periodic("halves vs shifted halves", {Partition::dyadic(u, 2), Partition::shifted_dyadic(u, 2, 16)});
  periodic("quarters vs shifted quarters",
           {Partition::dyadic(u, 4), Partition::shifted_dyadic(u, 4, 8)});
  periodic("random:3 pair", {Partition::random(r, 3, 11), Partition::random(r, 3, 12)});
  periodic("intervals vs dyadic:4",
           {Partition::random_intervals(r, 3, 5), Partition::dyadic(r, 4)});
  return cases;
}

void criteria9_10() {
  const auto phi = YoungFunction::power(2.0);
  const AnalysisOptions options{1e-3, 32, 4, 1};
  bool all9 = true, all10 = true;
  std::vector<std::string> notes9, notes10;
  for (const auto& c : suite()) {
    const auto target = upper_limit(c.seq.window());
    const auto a = analyze(c.seq, target, phi, options);
    const bool muperp = *a.condexp.muperp, mu_and_perp = *a.mu.mu && *a.perp.perp;
    bool ok9 = a.equivalence_holds && muperp == mu_and_perp;
    std::string note = fmt("%s: condexp=%s mu&perp=%s", c.name.c_str(), muperp ? "T" : "F",
                           mu_and_perp ? "T" : "F");
    if (c.kind == Case::Periodic) {
      // Two-step exact margin: the condexp trace alternates between the two
      // cycle members, so its tail minimum is the smaller of the two values.
      const auto fs = default_function_battery(target, options.random_functions, options.seed + 1000);
      double step_min = INFINITY;
      for (const auto& p : c.cycle) {
        double step = 0.0;
        for (const auto& f : fs) {
          step = std::max(step, luxemburg_norm(cond_exp(f, p) - cond_exp(f, target), phi));
        }
        step_min = std::min(step_min, step);
      }
      const auto& trace = a.condexp.find("condexp_norm_max")->values;
      double tail_min = INFINITY;
      for (std::size_t n = tail_begin(trace.size()); n < trace.size(); ++n) {
        tail_min = std::min(tail_min, trace[n]);
      }
      ok9 = ok9 && !muperp && !mu_and_perp && step_min > options.tol &&
            std::fabs(tail_min - step_min) <= 1e-12 * std::max(1.0, step_min);
      note += fmt(" margin=%.6g (two-step exact %.6g)", tail_min, step_min);
    } else {
      ok9 = ok9 && muperp && mu_and_perp;
    }
    if (!ok9) note += " <-- mismatch";
    all9 = all9 && ok9;
    notes9.push_back(note);

    const auto& s = a.sandwich;
    bool ok10 = s.lower_blocks_in_amu && s.perp_generators_upper_measurable && s.chain_ordered;
    if (c.kind == Case::Refining) ok10 = ok10 && s.all_equal;
    all10 = all10 && ok10;
    notes10.push_back(fmt("%s: lower=%zu A_mu=%zu A_perp=%zu upper=%zu%s", c.name.c_str(),
                          s.lower.block_count(), s.mu_estimate.block_count(),
                          s.perp_estimate.algebra.block_count(), s.upper.block_count(),
                          ok10 ? "" : " <-- failed"));
  }
  report(9, all9, "Equivalence of condexp convergence with mu AND perp",
         "12 sequences (4 refining, 4 constant, 4 periodic), window 64, tol 1e-3");
  for (const auto& n : notes9) std::printf("          %s\n", n.c_str());
  report(10, all10, "Sandwich lower <= A_mu <= A_perp <= upper",
         "lower blocks in A_mu, A_perp generators upper-measurable, refining chains all equal");
  for (const auto& n : notes10) std::printf("          %s\n", n.c_str());
}

void criterion11() {
  std::mt19937_64 rng(1111);
  double worst = -INFINITY;
  for (int i = 0; i < 100; ++i) {
    auto space = DyadicSpace::random(6, rng());
    const auto p = oracle::random_partition(space, rng, 12);
    const auto d = oracle::random_set(space, rng);
    const double ours = symm_diff_measure(best_approx(p, d), d);
    worst = std::max(worst, ours - oracle::exhaustive_best_distance(p, d));
  }
  report(11, worst <= 1e-15, "best_approx is optimal over all block unions",
         fmt("100 spaces, <= 12 blocks, max improvement found by enumeration %.3g", worst));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criteria9_10();
  criterion11();
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
