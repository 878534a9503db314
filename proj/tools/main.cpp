// Command-line front end: `ringks run <config> [--out <dir>]` executes one
// run specification, `ringks validate` runs the built-in verification suite.
// Exit codes: 0 success, 1 configuration error, 2 numerical failure,
// 3 non-convergence (when the config demands convergence).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "ringks/config.hpp"
#include "ringks/errors.hpp"
#include "ringks/runner.hpp"
#include "ringks/validation.hpp"

namespace {

int run_from_file(const std::string& config_path, const std::string& out) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: [config] cannot read config file " << config_path
              << "\n";
    return 1;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const ringks::RunSpec spec = ringks::parse_config(buffer.str());
  if (spec.mode == ringks::RunMode::validate) {
    const auto results = ringks::validation::run_suite(&std::cout);
    for (const auto& r : results)
      if (!r.passed) return 2;
    return 0;
  }
  ringks::run(spec, out);
  std::cout << "run complete; artifacts in "
            << (out.empty() ? spec.output_dir : out) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D finite-temperature Kohn-Sham solver with dual density "
               "routes and real-time propagation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto* run_cmd = app.add_subcommand("run", "execute a run specification");
  run_cmd->add_option("config", config_path, "path to a key = value config")
      ->required();
  run_cmd->add_option("--out", out_dir, "override the output directory");

  auto* validate_cmd =
      app.add_subcommand("validate", "run the built-in verification suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (validate_cmd->parsed()) {
      const auto results = ringks::validation::run_suite(&std::cout);
      int failures = 0;
      for (const auto& r : results) failures += r.passed ? 0 : 1;
      std::cout << (results.size() - failures) << "/" << results.size()
                << " checks passed\n";
      return failures == 0 ? 0 : 2;
    }
    return run_from_file(config_path, out_dir);
  } catch (const ringks::non_convergence_error& e) {
    std::cerr << "error: [non-convergence] " << e.what() << "\n";
    return 3;
  } catch (const ringks::config_error& e) {
    std::cerr << "error: [config] " << e.what() << "\n";
    return 1;
  } catch (const ringks::usage_error& e) {
    std::cerr << "error: [usage] " << e.what() << "\n";
    return 1;
  } catch (const ringks::error& e) {
    std::cerr << "error: [numerical] " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: [internal] " << e.what() << "\n";
    return 2;
  }
}
