#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orlicz/convergence.hpp"
#include "orlicz/function.hpp"
#include "orlicz/measure.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` scenario description. Values are quoted strings,
/// numbers or true/false; `#` starts a comment.
///
///   space.K          resolution (required)
///   space.weights    "uniform" | "random:<seed>"
///   space.total      total mass, default 1
///   phi              Young function, default "power:2"
///   sequence         "refining" | "periodic" | "constant" | "explicit"
///   sequence.start   refining: first exponent (default 1)
///   sequence.step    refining: repeats per exponent (default 1)
///   sequence.cycle   periodic/explicit: partitions separated by ';'
///   sequence.prefix  periodic: burn-in partitions separated by ';'
///   sequence.partition  constant: the partition
///   window           window length, default 64
///   target           "upper" | "lower" | partition, default "upper"
///   battery          dual battery size, default 32
///   seed             battery seed, default 1
///   functions        random functions in the f battery, default 4
///   tol              convergence tolerance, default 1e-3
///   expect.mu | expect.perp | expect.muperp   expected verdicts
///   check.monotone   require a nonincreasing aggregate norm trace
///   out              output directory
///
/// Partition specs: trivial, finest, dyadic:n, shifted:n,s, random:m,seed,
/// intervals:m,seed, labels:l0,l1,...
struct Scenario {
  int resolution = 0;
  std::string weights = "uniform";
  double total = 1.0;
  std::string phi = "power:2";
  std::string sequence;
  int start = 1;
  int step = 1;
  std::vector<std::string> cycle;
  std::vector<std::string> prefix;
  std::string partition;
  std::size_t window = 64;
  std::string target = "upper";
  std::size_t battery = 32;
  std::uint64_t seed = 1;
  std::size_t functions = 4;
  double tol = 1e-3;
  std::optional<bool> expect_mu;
  std::optional<bool> expect_perp;
  std::optional<bool> expect_muperp;
  bool check_monotone = false;
  std::string out;
};

/// Throws ConfigError on syntax errors, unknown or duplicate keys, and bad values.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& file);

SpaceHandle parse_space(std::string_view weights, int resolution, double total);
Partition parse_partition(std::string_view spec, const SpaceHandle& space);

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 verdict mismatch or violation, 2 config error
  std::string message;
  std::filesystem::path out_dir;
};

/// Runs one scenario and writes <out>/report.csv and <out>/verdicts.txt.
/// `out_override`, when nonempty, replaces the scenario's output directory.
RunResult run_scenario_file(const std::filesystem::path& file,
                            const std::filesystem::path& out_override = {});
RunResult run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir);

/// (n, N_phi(E(f | G_n) - f)) for n = 2, 4, ..., n_max.
std::vector<std::pair<std::size_t, double>> example_dyadic(const SimpleFunction& f,
                                                           const YoungFunction& phi,
                                                           std::size_t n_max);

}  // namespace orlicz
