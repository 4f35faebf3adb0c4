#include <algorithm>
#include <future>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orlicz/condexp.hpp"
#include "orlicz/function.hpp"
#include "orlicz/scenario.hpp"

namespace {

int cmd_run(const std::vector<std::string>& files, const std::string& out, std::size_t jobs) {
  namespace fs = std::filesystem;
  auto out_for = [&](const fs::path& file) -> fs::path {
    if (out.empty()) return {};
    return files.size() == 1 ? fs::path(out) : fs::path(out) / file.stem();
  };

  std::vector<orlicz::RunResult> results(files.size());
  jobs = std::max<std::size_t>(1, jobs);
  for (std::size_t begin = 0; begin < files.size(); begin += jobs) {
    const auto end = std::min(files.size(), begin + jobs);
    std::vector<std::future<orlicz::RunResult>> pending;
    for (std::size_t i = begin; i < end; ++i) {
      pending.push_back(std::async(std::launch::async, [&, i] {
        return orlicz::run_scenario_file(files[i], out_for(files[i]));
      }));
    }
    for (std::size_t i = begin; i < end; ++i) results[i] = pending[i - begin].get();
  }

  int code = 0;
  for (const auto& r : results) {
    (r.exit_code == 0 ? std::cout : std::cerr) << r.message << '\n';
    code = std::max(code, r.exit_code);
  }
  return code;
}

int cmd_norm(const std::string& f_spec, const std::string& phi_spec, int k) {
  try {
    auto space = orlicz::DyadicSpace::uniform(k);
    const auto f = orlicz::SimpleFunction::parse(f_spec, space);
    const auto phi = orlicz::YoungFunction::parse(phi_spec);
    std::cout << std::setprecision(10) << orlicz::luxemburg_norm(f, phi) << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

int cmd_example_dyadic(std::size_t n_max, const std::string& phi_spec, const std::string& f_spec,
                       int k, double tol) {
  std::vector<std::pair<std::size_t, double>> trace;
  try {
    auto space = orlicz::DyadicSpace::uniform(k);
    const auto f = orlicz::SimpleFunction::parse(f_spec, space);
    const auto phi = orlicz::YoungFunction::parse(phi_spec);
    trace = orlicz::example_dyadic(f, phi, n_max);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::cout << "n,error\n" << std::setprecision(15);
  for (const auto& [n, err] : trace) std::cout << n << ',' << err << '\n';

  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i].second > trace[i - 1].second + 1e-12) {
      std::cerr << "trace increases at n=" << trace[i].first << '\n';
      return 1;
    }
  }
  if (!(trace.back().second < tol)) {
    std::cerr << "final error " << trace.back().second << " is not below tol " << tol << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orlicz-space conditional expectation laboratory"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  std::string out;
  std::size_t jobs = 1;
  auto* run = app.add_subcommand("run", "Run scenario files");
  run->add_option("files", files, "Scenario files")->required();
  run->add_option("--out", out, "Output directory (per-file subdirectories when several)");
  run->add_option("--jobs", jobs, "Scenarios to run concurrently")->check(CLI::PositiveNumber);

  std::string f_spec, phi_spec;
  int k = 10;
  auto* norm = app.add_subcommand("norm", "Print the Luxemburg norm of a function");
  norm->add_option("f", f_spec)->required();
  norm->add_option("phi", phi_spec)->required();
  norm->add_option("K", k)->required();

  std::size_t n_max = 0;
  double tol = 1e-3;
  auto* dyadic = app.add_subcommand("example-dyadic", "Dyadic approximation error trace");
  dyadic->add_option("nmax", n_max)->required();
  dyadic->add_option("phi", phi_spec)->required();
  dyadic->add_option("f", f_spec)->required();
  dyadic->add_option("K", k)->required();
  dyadic->add_option("--tol", tol, "Bound on the final error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*run) return cmd_run(files, out, jobs);
  if (*norm) return cmd_norm(f_spec, phi_spec, k);
  return cmd_example_dyadic(n_max, phi_spec, f_spec, k, tol);
}
