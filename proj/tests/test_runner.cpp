#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "ringks/config.hpp"
#include "ringks/runner.hpp"

using namespace ringks;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ringks-test-" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

int line_count(const fs::path& p) {
  std::ifstream in(p);
  int count = 0;
  std::string line;
  while (std::getline(in, line)) ++count;
  return count;
}

}  // namespace

TEST_CASE("static run writes the full artifact set") {
  const fs::path out = fresh_dir("static");
  const RunSpec spec = parse_config(
      "mode = static\n"
      "grid.points = 64\n"
      "grid.length = 12.0\n"
      "constants.beta = 1.0\n"
      "potential.external = harmonic\n"
      "scf.route = spectral\n");
  run(spec, out.string());

  for (const char* name :
       {"density.csv", "field.csv", "spectrum.csv", "report.txt"})
    REQUIRE(fs::exists(out / name));

  REQUIRE(first_line(out / "density.csv") == "r,n");
  REQUIRE(first_line(out / "field.csv") == "r,w");
  REQUIRE(first_line(out / "spectrum.csv") == "index,energy,occupation");
  REQUIRE(line_count(out / "density.csv") == 65);
  REQUIRE(line_count(out / "spectrum.csv") == 65);

  const std::string report = slurp(out / "report.txt");
  REQUIRE_THAT(report, ContainsSubstring("free energy F"));
  REQUIRE_THAT(report, ContainsSubstring("partition function Q(beta)"));
  REQUIRE_THAT(report, ContainsSubstring("converged: yes"));
  fs::remove_all(out);
}

TEST_CASE("numbers are written in full scientific precision") {
  const fs::path out = fresh_dir("precision");
  run(parse_config("mode = static\n"
                   "grid.points = 16\n"
                   "grid.length = 4.0\n"
                   "constants.beta = 1.0\n"
                   "scf.route = spectral\n"),
      out.string());
  std::ifstream in(out / "density.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  REQUIRE_THAT(row, ContainsSubstring("e"));  // scientific notation
  const auto comma = row.find(',');
  REQUIRE(row.substr(comma + 1).size() >= 22);  // 17 significant digits
  fs::remove_all(out);
}

TEST_CASE("beta sweep emits the Q and F trace") {
  const fs::path out = fresh_dir("sweep");
  run(parse_config("mode = beta_sweep\n"
                   "grid.points = 48\n"
                   "grid.length = 12.0\n"
                   "constants.beta = 1.0\n"
                   "potential.external = harmonic\n"
                   "scf.route = spectral\n"
                   "sweep.beta_min = 0.5\n"
                   "sweep.beta_max = 2.0\n"
                   "sweep.count = 4\n"),
      out.string());
  REQUIRE(first_line(out / "q_trace.csv") == "beta,Q,F");
  REQUIRE(line_count(out / "q_trace.csv") == 5);
  fs::remove_all(out);
}

TEST_CASE("classical limit emits cylinder.csv") {
  const fs::path out = fresh_dir("classical");
  run(parse_config("mode = classical_limit\n"
                   "grid.points = 96\n"
                   "grid.length = 14.0\n"
                   "constants.beta = 1.0\n"
                   "potential.external = harmonic\n"
                   "classical.hbar_values = 1, 0.5\n"),
      out.string());
  REQUIRE(first_line(out / "cylinder.csv") == "hbar,l1_distance");
  REQUIRE(line_count(out / "cylinder.csv") == 3);
  fs::remove_all(out);
}

TEST_CASE("dynamics emits trajectory and snapshots") {
  const fs::path out = fresh_dir("dynamics");
  run(parse_config("mode = dynamics\n"
                   "grid.points = 48\n"
                   "grid.length = 12.0\n"
                   "constants.beta = 1.0\n"
                   "potential.external = harmonic\n"
                   "scf.route = spectral\n"
                   "scf.occupancy = zero_t\n"
                   "scf.eigenpairs = 4\n"
                   "dynamics.dt = 0.01\n"
                   "dynamics.steps = 25\n"
                   "dynamics.record_every = 10\n"),
      out.string());
  REQUIRE(first_line(out / "trajectory.csv") ==
          "step,t,norm_defect,energy,dipole");
  REQUIRE(first_line(out / "snapshots.csv") == "step,t,r,n");
  // records at steps 0, 10, 20 and the final step 25
  REQUIRE(line_count(out / "trajectory.csv") == 5);
  REQUIRE(line_count(out / "snapshots.csv") == 1 + 4 * 48);
  fs::remove_all(out);
}

TEST_CASE("failed runs leave no partial artifacts behind") {
  const fs::path out = fresh_dir("failing");
  const RunSpec spec = parse_config(
      "mode = static\n"
      "grid.points = 48\n"
      "grid.length = 12.0\n"
      "constants.beta = 1.0\n"
      "constants.particles = 2\n"
      "potential.external = harmonic\n"
      "potential.hartree.coupling = 0.6\n"
      "scf.route = spectral\n"
      "scf.occupancy = zero_t\n"
      "scf.eigenpairs = 8\n"
      "scf.max_iterations = 1\n"
      "scf.tolerance = 1e-15\n"
      "scf.require_convergence = true\n");
  REQUIRE_THROWS_AS(run(spec, out.string()), non_convergence_error);
  REQUIRE(fs::is_empty(out));
  fs::remove_all(out);
}
