#include "orlicz/scenario.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "orlicz/condexp.hpp"

namespace orlicz {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <class T>
T parse_integer(std::string_view text, const std::string& what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(what + ": expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

double parse_real(std::string_view text, const std::string& what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(what + ": expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view text, const std::string& what) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ConfigError(what + ": expected true or false, got '" + std::string(text) + "'");
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  for (auto part : split(text, ';')) {
    if (!part.empty()) out.emplace_back(part);
  }
  return out;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!value.empty() && value.front() == '"') {
      if (value.size() < 2 || value.back() != '"') {
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated string");
      }
      value = value.substr(1, value.size() - 2);
    }
    if (!kv.emplace(std::string(key), std::string(value)).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" +
                        std::string(key) + "'");
    }
  }

  Scenario s;
  bool have_k = false;
  for (const auto& [key, value] : kv) {
    if (key == "space.K") {
      s.resolution = parse_integer<int>(value, key);
      have_k = true;
    } else if (key == "space.weights") {
      s.weights = value;
    } else if (key == "space.total") {
      s.total = parse_real(value, key);
    } else if (key == "phi") {
      s.phi = value;
    } else if (key == "sequence") {
      s.sequence = value;
    } else if (key == "sequence.start") {
      s.start = parse_integer<int>(value, key);
    } else if (key == "sequence.step") {
      s.step = parse_integer<int>(value, key);
    } else if (key == "sequence.cycle") {
      s.cycle = split_list(value);
    } else if (key == "sequence.prefix") {
      s.prefix = split_list(value);
    } else if (key == "sequence.partition") {
      s.partition = value;
    } else if (key == "window") {
      s.window = parse_integer<std::size_t>(value, key);
    } else if (key == "target") {
      s.target = value;
    } else if (key == "battery") {
      s.battery = parse_integer<std::size_t>(value, key);
    } else if (key == "seed") {
      s.seed = parse_integer<std::uint64_t>(value, key);
    } else if (key == "functions") {
      s.functions = parse_integer<std::size_t>(value, key);
    } else if (key == "tol") {
      s.tol = parse_real(value, key);
    } else if (key == "expect.mu") {
      s.expect_mu = parse_bool(value, key);
    } else if (key == "expect.perp") {
      s.expect_perp = parse_bool(value, key);
    } else if (key == "expect.muperp") {
      s.expect_muperp = parse_bool(value, key);
    } else if (key == "check.monotone") {
      s.check_monotone = parse_bool(value, key);
    } else if (key == "out") {
      s.out = value;
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  if (!have_k) throw ConfigError("missing required key 'space.K'");
  if (s.sequence.empty()) throw ConfigError("missing required key 'sequence'");
  if (!(s.tol > 0.0)) throw ConfigError("tol must be positive");
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open scenario file '" + file.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

SpaceHandle parse_space(std::string_view weights, int resolution, double total) {
  if (weights == "uniform") return DyadicSpace::uniform(resolution, total);
  if (weights.starts_with("random:")) {
    const auto seed = parse_integer<std::uint64_t>(weights.substr(7), "space.weights");
    return DyadicSpace::random(resolution, seed, total);
  }
  throw ConfigError("unknown weight profile '" + std::string(weights) + "'");
}

Partition parse_partition(std::string_view spec, const SpaceHandle& space) {
  spec = trim(spec);
  if (spec == "trivial") return Partition::trivial(space);
  if (spec == "finest") return Partition::finest(space);
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("unknown partition '" + std::string(spec) + "'");
  }
  const auto head = spec.substr(0, colon);
  const auto args = split(spec.substr(colon + 1), ',');
  const std::string what = "partition '" + std::string(spec) + "'";
  auto arg = [&](std::size_t i) {
    if (i >= args.size()) throw ConfigError(what + ": missing argument");
    return parse_integer<std::uint64_t>(args[i], what);
  };
  if (head == "dyadic") return Partition::dyadic(space, arg(0));
  if (head == "shifted") return Partition::shifted_dyadic(space, arg(0), arg(1));
  if (head == "random") return Partition::random(space, arg(0), arg(1));
  if (head == "intervals") return Partition::random_intervals(space, arg(0), arg(1));
  if (head == "labels") {
    std::vector<int> labels;
    for (auto a : args) labels.push_back(parse_integer<int>(a, what));
    return Partition::from_labels(space, labels);
  }
  throw ConfigError("unknown partition '" + std::string(spec) + "'");
}

namespace {

AlgebraSequence build_sequence(const Scenario& s, const SpaceHandle& space) {
  auto parse_all = [&](const std::vector<std::string>& specs) {
    std::vector<Partition> out;
    for (const auto& p : specs) out.push_back(parse_partition(p, space));
    return out;
  };
  if (s.sequence == "refining") return AlgebraSequence::refining(space, s.window, s.start, s.step);
  if (s.sequence == "constant") {
    if (s.partition.empty()) throw ConfigError("constant sequence needs 'sequence.partition'");
    return AlgebraSequence::constant(parse_partition(s.partition, space), s.window);
  }
  if (s.sequence == "periodic") {
    if (s.cycle.empty()) throw ConfigError("periodic sequence needs 'sequence.cycle'");
    return AlgebraSequence::periodic(parse_all(s.cycle), s.window, parse_all(s.prefix));
  }
  if (s.sequence == "explicit") {
    if (s.cycle.empty()) throw ConfigError("explicit sequence needs 'sequence.cycle'");
    return AlgebraSequence::explicit_list(parse_all(s.cycle));
  }
  throw ConfigError("unknown sequence kind '" + s.sequence + "'");
}

// Nonincreasing everywhere; strictly decreasing while positive across steps
// where the partition actually changes.
bool monotone_trace(const std::vector<double>& v, const AlgebraSequence& seq, std::string& why) {
  for (std::size_t n = 0; n + 1 < v.size(); ++n) {
    if (v[n + 1] > v[n] + 1e-12) {
      why = "increase at n=" + std::to_string(n + 1);
      return false;
    }
    if (v[n] > 1e-12 && !(seq[n + 1] == seq[n]) && !(v[n + 1] < v[n])) {
      why = "stall at n=" + std::to_string(n + 1) + " while positive";
      return false;
    }
  }
  return true;
}

}  // namespace

RunResult run_scenario(const Scenario& s, const std::filesystem::path& out_dir) {
  RunResult result;
  result.out_dir = out_dir;

  SpaceHandle space;
  std::optional<YoungFunction> phi;
  std::optional<AlgebraSequence> seq;
  std::optional<Partition> target;
  try {
    space = parse_space(s.weights, s.resolution, s.total);
    phi = YoungFunction::parse(s.phi);
    seq = build_sequence(s, space);
    if (s.target == "upper") {
      target = upper_limit(seq->window());
    } else if (s.target == "lower") {
      target = lower_limit(seq->window());
    } else {
      target = parse_partition(s.target, space);
    }
    require_delta2(*phi);
  } catch (const std::exception& e) {
    result.exit_code = 2;
    result.message = std::string("config error: ") + e.what();
    return result;
  }

  AnalysisOptions options;
  options.tol = s.tol;
  options.dual_battery_size = s.battery;
  options.random_functions = s.functions;
  options.seed = s.seed;
  std::optional<Analysis> analysis;
  try {
    analysis = analyze(*seq, *target, *phi, options);
  } catch (const WindowTooShort& e) {
    result.exit_code = 2;
    result.message = std::string("config error: ") + e.what();
    return result;
  }
  const Analysis& a = *analysis;

  std::vector<NamedCheck> checks;
  checks.push_back({"theorem_equivalence", a.equivalence_holds,
                    "condexp verdict must equal mu AND perp"});
  for (const auto* r : {&a.mu, &a.perp, &a.condexp}) {
    checks.insert(checks.end(), r->checks.begin(), r->checks.end());
  }
  checks.push_back({"lower_blocks_in_amu", a.sandwich.lower_blocks_in_amu, ""});
  checks.push_back({"perp_generators_upper_measurable",
                    a.sandwich.perp_generators_upper_measurable, ""});
  checks.push_back({"limit_chain_ordered", a.sandwich.chain_ordered,
                    "lower <= A_mu <= A_perp <= upper"});

  ConvergenceReport bounds;
  double bound_violation = -std::numeric_limits<double>::infinity();
  double recovery_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < std::min<std::size_t>(target->block_count(), 16); ++b) {
    const auto d = target->block_set(b);
    const auto ib = indicator_bound_check(*seq, d, *phi);
    const auto sr = set_recovery_check(*seq, d, *phi);
    bound_violation = std::max(bound_violation, ib.max_violation);
    recovery_violation = std::max(recovery_violation, sr.max_violation);
    if (b < 4) {
      const auto tag = "[" + std::to_string(b) + "]";
      bounds.traces.push_back({"indicator_bound_lhs" + tag, ib.lhs});
      bounds.traces.push_back({"indicator_bound_rhs" + tag, ib.rhs});
      bounds.traces.push_back({"set_recovery_lhs" + tag, sr.lhs});
      bounds.traces.push_back({"set_recovery_rhs" + tag, sr.rhs});
    }
  }
  {
    std::ostringstream d1, d2;
    d1 << "max lhs - rhs = " << bound_violation;
    d2 << "max lhs - rhs = " << recovery_violation;
    checks.push_back({"indicator_bound", bound_violation <= 1e-9, d1.str()});
    checks.push_back({"set_recovery", recovery_violation <= 1e-12, d2.str()});
  }

  if (s.check_monotone) {
    std::string why;
    const bool ok = monotone_trace(a.condexp.find("condexp_norm_max")->values, *seq, why);
    checks.push_back({"condexp_monotone", ok, why});
  }

  std::vector<std::string> expectations;
  bool expectations_met = true;
  auto expect = [&](const char* name, const std::optional<bool>& want,
                    const std::optional<bool>& got) {
    if (!want) return;
    const bool ok = got && *got == *want;
    expectations_met = expectations_met && ok;
    expectations.push_back(std::string("EXPECT ") + name + "=" + (*want ? "true" : "false") +
                           " observed=" + (got ? (*got ? "true" : "false") : "na") +
                           (ok ? " PASS" : " FAIL"));
  };
  expect("mu", s.expect_mu, a.mu.mu);
  expect("perp", s.expect_perp, a.perp.perp);
  expect("muperp", s.expect_muperp, a.condexp.muperp);

  const bool checks_ok =
      std::all_of(checks.begin(), checks.end(), [](const NamedCheck& c) { return c.passed; });
  result.exit_code = (checks_ok && expectations_met) ? 0 : 1;

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    result.exit_code = 2;
    result.message = "cannot create output directory '" + out_dir.string() + "'";
    return result;
  }

  {
    std::ofstream csv(out_dir / "report.csv", std::ios::binary);
    csv << "n,metric,value\n";
    a.mu.write_csv_rows(csv);
    a.perp.write_csv_rows(csv);
    a.condexp.write_csv_rows(csv);
    bounds.write_csv_rows(csv);
  }

  ConvergenceReport verdicts;
  verdicts.mu = a.mu.mu;
  verdicts.perp = a.perp.perp;
  verdicts.muperp = a.condexp.muperp;
  std::ostringstream text;
  text << std::setprecision(10);
  text << verdicts.verdict_line() << '\n';
  text << "SANDWICH lower_atoms=" << a.sandwich.lower.block_count()
       << " amu_atoms=" << a.sandwich.mu_estimate.block_count()
       << " aperp_atoms=" << a.sandwich.perp_estimate.algebra.block_count()
       << " upper_atoms=" << a.sandwich.upper.block_count()
       << " muperp_estimate=" << (a.sandwich.muperp ? "true" : "false")
       << " all_equal=" << (a.sandwich.all_equal ? "true" : "false") << '\n';
  text << "MARGIN condexp_tail_max=" << a.condexp_margin << " tol=" << s.tol << '\n';
  for (const auto& c : checks) {
    text << "CHECK " << c.name << ' ' << (c.passed ? "PASS" : "FAIL");
    if (!c.detail.empty()) text << " (" << c.detail << ')';
    text << '\n';
  }
  for (const auto& e : expectations) text << e << '\n';
  text << "STATUS " << (result.exit_code == 0 ? "ok" : "failed") << '\n';
  std::ofstream(out_dir / "verdicts.txt", std::ios::binary) << text.str();

  result.message = verdicts.verdict_line();
  return result;
}

RunResult run_scenario_file(const std::filesystem::path& file,
                            const std::filesystem::path& out_override) {
  Scenario s;
  try {
    s = load_scenario(file);
  } catch (const std::exception& e) {
    RunResult r;
    r.exit_code = 2;
    r.message = file.string() + ": " + e.what();
    return r;
  }
  std::filesystem::path out = out_override;
  if (out.empty()) out = s.out.empty() ? std::filesystem::path("out") / file.stem() : std::filesystem::path(s.out);
  auto r = run_scenario(s, out);
  r.message = file.string() + ": " + r.message;
  return r;
}

std::vector<std::pair<std::size_t, double>> example_dyadic(const SimpleFunction& f,
                                                           const YoungFunction& phi,
                                                           std::size_t n_max) {
  const auto cells = f.space()->cells();
  if (n_max < 2 || !std::has_single_bit(n_max) || n_max > cells) {
    throw std::domain_error("n_max must be a power of two with 2 <= n_max <= 2^K");
  }
  std::vector<std::pair<std::size_t, double>> trace;
  for (std::size_t n = 2; n <= n_max; n *= 2) {
    const auto p = Partition::dyadic(f.space(), n);
    trace.emplace_back(n, luxemburg_norm(cond_exp(f, p) - f, phi));
  }
  return trace;
}

}  // namespace orlicz
