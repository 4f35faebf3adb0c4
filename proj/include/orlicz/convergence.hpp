#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "orlicz/function.hpp"
#include "orlicz/measure.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

/// A finite window of a sequence of sigma-subalgebras with a declared tail
/// shape. The window is materialized once at construction.
class AlgebraSequence {
 public:
  enum class Kind { DyadicRefinement, Periodic, Explicit };

  /// Entry n is the dyadic partition into 2^exponents[n] blocks; exponents
  /// past the end of the list repeat the last one. Exponents are capped at K.
  static AlgebraSequence dyadic_refinement(SpaceHandle space, std::vector<int> exponents,
                                           std::size_t window);
  /// Exponents start, start, ... (each repeated `step` times), +1, ... up to K.
  static AlgebraSequence refining(SpaceHandle space, std::size_t window, int start = 1,
                                  int step = 1);
  /// prefix..., then cycle repeated.
  static AlgebraSequence periodic(std::vector<Partition> cycle, std::size_t window,
                                  std::vector<Partition> prefix = {});
  static AlgebraSequence constant(Partition p, std::size_t window);
  static AlgebraSequence explicit_list(std::vector<Partition> partitions);

  Kind kind() const { return kind_; }
  const SpaceHandle& space() const { return window_.front().space(); }
  std::size_t window_length() const { return window_.size(); }
  /// Declared period of the tail (1 unless periodic).
  std::size_t period() const { return period_; }
  const std::vector<Partition>& window() const { return window_; }
  const Partition& operator[](std::size_t n) const { return window_[n]; }

 private:
  AlgebraSequence(Kind kind, std::vector<Partition> window, std::size_t period);

  Kind kind_;
  std::vector<Partition> window_;
  std::size_t period_;
};

class Delta2Required : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Throws Delta2Required unless check_delta2 certifies phi.
void require_delta2(const YoungFunction& phi);

struct Trace {
  std::string metric;
  std::vector<double> values;
};

struct NamedCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ConvergenceReport {
  std::vector<Trace> traces;
  std::optional<bool> mu;
  std::optional<bool> perp;
  std::optional<bool> muperp;
  double tol = 0.0;
  std::vector<NamedCheck> checks;

  const Trace* find(const std::string& metric) const;
  /// Max over the last quarter of the named trace.
  double tail_max(const std::string& metric) const;
  bool all_checks_passed() const;

  /// Appends another report's traces, verdicts and checks.
  void merge(const ConvergenceReport& other);

  /// Rows "n,metric,value" (no header).
  void write_csv_rows(std::ostream& out) const;
  /// "VERDICT mu=... perp=... muperp=..." with "na" for unset verdicts.
  std::string verdict_line() const;
};

double tail_max(const std::vector<double>& values);

/// For every block D of `target`: the distance trace mu(A*_n delta D) with
/// A*_n = best_approx(A_n, D), and the Orlicz-side trace
/// N_phi(chi_{A*_n} - chi_D). Sets `mu`; adds a check that both traces give
/// the same verdict.
ConvergenceReport mu_convergence_test(const AlgebraSequence& seq, const Partition& target,
                                      double tol, const YoungFunction& phi);

enum class PairingMode { Set, Function };

/// pairings[g][n] = integral of E^perp_D(u_n) g, where u_n is the indicator
/// of the union of A_n-blocks maximizing |pairing| (Set) or E(f | A_n)
/// (Function).
std::vector<std::vector<double>> weak_pairing_trace(const AlgebraSequence& seq,
                                                    const Partition& d_target,
                                                    const SimpleFunction* f,
                                                    const std::vector<SimpleFunction>& battery,
                                                    const YoungFunction& phi, PairingMode mode);

/// Dual test functions: indicators of up to half the battery's worth of
/// upper-limit blocks, then seeded uniform(-1, 1) functions.
std::vector<SimpleFunction> default_dual_battery(const AlgebraSequence& seq, std::size_t size,
                                                 std::uint64_t seed);

struct PerpAlgebraEstimate {
  Partition algebra;
  std::vector<MeasurableSet> generators;
};

/// Estimate of the algebra generated by weak subsequence limits of
/// indicators: Cesaro averages of block indicators along each residue class
/// of the declared period over the tail, thresholded at 0.25, 0.5, 0.75.
PerpAlgebraEstimate estimate_perp_algebra(const AlgebraSequence& seq);

/// Estimate of A_mu: the meet of the tail partitions.
Partition estimate_mu_algebra(const AlgebraSequence& seq);

/// Sets `perp` from the adversarial set-mode pairing tails and records the
/// lower <= A_perp estimate <= upper check.
ConvergenceReport perp_convergence_test(const AlgebraSequence& seq, const Partition& d_target,
                                        const std::vector<SimpleFunction>& battery,
                                        const YoungFunction& phi, double tol);

/// Trace N_phi(E(f | A_n) - E(f | D)); sets `muperp` from its tail.
ConvergenceReport condexp_convergence_test(const SimpleFunction& f, const AlgebraSequence& seq,
                                           const Partition& d_target, const YoungFunction& phi,
                                           double tol);

/// Indicators of target blocks, identity, and seeded random functions.
std::vector<SimpleFunction> default_function_battery(const Partition& target,
                                                     std::size_t random_count,
                                                     std::uint64_t seed);

/// condexp_convergence_test over a battery of f; `muperp` is true iff every
/// f converges. Adds the aggregate trace "condexp_norm_max".
ConvergenceReport condexp_battery_test(const std::vector<SimpleFunction>& fs,
                                       const AlgebraSequence& seq, const Partition& d_target,
                                       const YoungFunction& phi, double tol);

struct BoundTrace {
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<std::uint8_t> evaluated;
  double max_violation = -std::numeric_limits<double>::infinity();
};

/// N_phi(E(chi_D | A_n) - chi_D) against 2 / phi^{-1}(1 / (2 mu(A*_n delta D)))
/// with A*_n = best_approx(A_n, D). Steps with A*_n = D are skipped.
BoundTrace indicator_bound_check(const AlgebraSequence& seq, const MeasurableSet& d,
                                 const YoungFunction& phi);

/// (1/2) mu(A_n delta D) against integral of |E(chi_D | A_n) - chi_D| with
/// A_n = {E(chi_D | A_n) > 1/2}.
BoundTrace set_recovery_check(const AlgebraSequence& seq, const MeasurableSet& d,
                              const YoungFunction& phi);

struct SandwichReport {
  Partition lower;
  Partition upper;
  Partition mu_estimate;
  PerpAlgebraEstimate perp_estimate;
  bool lower_blocks_in_amu = false;
  bool perp_generators_upper_measurable = false;
  bool chain_ordered = false;  // lower <= A_mu <= A_perp <= upper
  bool all_equal = false;
  bool muperp = false;         // A_mu estimate == A_perp estimate
};

SandwichReport sandwich_check(const AlgebraSequence& seq, double tol, std::size_t m_max = 0);

struct AnalysisOptions {
  double tol = 1e-3;
  std::size_t dual_battery_size = 32;
  std::size_t random_functions = 4;
  std::uint64_t seed = 1;
};

struct Analysis {
  ConvergenceReport mu;
  ConvergenceReport perp;
  ConvergenceReport condexp;
  SandwichReport sandwich;
  bool equivalence_holds = false;  // condexp verdict == (mu && perp)
  double condexp_margin = 0.0;     // tail max of the aggregate condexp trace
};

/// Runs the mu, perp and condexp tests plus the sandwich check for one
/// sequence and target and cross-checks the three verdicts.
Analysis analyze(const AlgebraSequence& seq, const Partition& target, const YoungFunction& phi,
                 const AnalysisOptions& options);

}  // namespace orlicz
