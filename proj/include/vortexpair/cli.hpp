#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vortexpair/asymptotics.hpp"

namespace vp {

struct RunConfig {
  std::string command;  ///< solve, sweep, evolve, stability, reference, verify
  std::string profile = "disk(1)";
  std::vector<double> eps{0.1};
  double q = 1.0;
  std::optional<std::string> grid;  ///< "LxH:nx"
  std::optional<double> r0;
  std::filesystem::path out = "out";
  double p = 4.0;
  std::uint64_t seed = 0;

  int max_iters = 500;
  double tolerance = 1e-10;
  double cells_per_eps = 8.0;

  double T = 0.0;  ///< evolution horizon; 0 means 0.5 eps
  double cfl = 0.9;
  int snapshot_every = 0;
  std::string perturbation = "tilt";
  double delta = 0.01;

  double lamb_radius = 1.0;
  double lamb_speed = 1.0;
  double vortex_kappa = 4.0 * 3.14159265358979323846;
  double vortex_height = 1.0;

  void validate() const;
};

enum ExitCode { exit_ok = 0, exit_check_failed = 1, exit_error = 2 };

/// Runs one command, writing its artifacts under cfg.out and progress lines
/// to log. Never throws; errors map to exit_error with a message on err.
int run(const RunConfig& cfg, std::ostream& log, std::ostream& err);

/// report.csv, verdicts.json, fields/eps_<eps>.{bin,json} and log.csv.
void emit_report(const SweepReport& report, const std::vector<Verdict>& verdicts, const std::filesystem::path& dir);

/// Field stem for one eps: "eps_<shortest decimal>".
std::string eps_stem(double eps);

struct VerifyResult {
  std::size_t rows = 0;
  std::size_t mismatches = 0;
  double max_relative_error = 0.0;
  std::vector<std::string> messages;
};

/// Recomputes every row of dir/report.csv from dir/fields and compares.
VerifyResult verify_report(const std::filesystem::path& dir, double tolerance = 1e-12);

SolverConfig solver_config(const RunConfig& cfg, double eps);

}  // namespace vp
