#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vortexpair/functionals.hpp"
#include "vortexpair/grid.hpp"
#include "vortexpair/kernel.hpp"
#include "vortexpair/profiles.hpp"
#include "vortexpair/rearrange.hpp"

namespace vp {

/// Solver failure; `kind` selects the message family.
class SolverError : public Error {
 public:
  enum class Kind { boundary, not_converged, objective_decreased, invalid };
  SolverError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Window override "L x H : nx".
struct GridSpec {
  double half_width = 0.0;
  double height = 0.0;
  int nx = 0;
};

GridSpec parse_grid_spec(const std::string& s);

struct SolverConfig {
  double eps = 0.1;
  double q = 1.0;
  ReferenceProfile profile = ReferenceProfile::disk(1.0);
  std::optional<GridSpec> grid;
  double cells_per_eps = 8.0;  ///< h = eps / cells_per_eps when the window is auto-sized
  int max_iters = 500;
  double tolerance = 1e-10;  ///< relative objective increment counted as a plateau
  bool symmetric = true;
  std::optional<double> r0;           ///< constrained mode: supp in B_r0(center)
  std::optional<Point> constraint_center;  ///< defaults to x_hat
  std::optional<Point> init_center;        ///< defaults to x_hat
  bool check_boundary = true;

  void validate() const;
};

/// x_hat = (0, kappa / (4 pi q)), the limit of the centroid.
Point limit_point(double kappa, double q);

/// Window used for cfg: the override if present, otherwise
/// L = max(4 x_hat2, 10 eps a), H = 4 x_hat2, h = eps / cells_per_eps.
Grid solver_grid(const SolverConfig& cfg);

/// Discrete class of rho^eps at spacing h, padded with zeros to n cells.
MassProfile class_profile(const ReferenceProfile& rho, double eps, double h, std::size_t n);

struct ConstraintBall {
  Point center;
  double radius = 0.0;
};

/// Everything the ascent needs, independent of how the class was built.
struct AscentProblem {
  Grid grid;
  MassProfile profile;
  double q = 1.0;
  std::optional<ScalarField> initial;  ///< defaults to symmetric_decreasing at init_center
  Point init_center;
  bool symmetric = true;
  std::optional<ConstraintBall> ball;
  int max_iters = 500;
  double tolerance = 1e-10;
  bool check_boundary = true;
  KernelMode mode = KernelMode::fast;
};

enum class StopReason { fixed_point, plateau, cycle };
const char* to_string(StopReason r);

struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;
  double mu = 0.0;
  std::size_t support_size = 0;
};

struct MaximizerResult {
  ScalarField zeta;
  ScalarField psi;   ///< G zeta
  ScalarField phi;   ///< potential used for the last assignment (mirror-averaged in symmetric mode)
  double q = 0.0;
  double objective = 0.0;  ///< T_eps on this grid
  double mu = 0.0;
  double multiplier_gap = 0.0;
  CellSet core;
  int iterations = 0;
  bool converged = false;
  StopReason reason = StopReason::fixed_point;
  double asymmetry = 0.0;
  std::size_t monotone_violations = 0;
  std::vector<IterationRecord> log;
};

/// Monotone rearrangement ascent: zeta_{k+1} = maximize_linear(profile, G zeta_k - q x2).
/// Stops at a repeated assignment, after three consecutive relative
/// increments below tolerance, or when an assignment recurs within the last
/// eight iterates (reported as a cycle); returns the best iterate.
MaximizerResult ascend(const AscentProblem& problem);
MaximizerResult ascend(const SolverConfig& cfg);

struct MultiplierReport {
  double mu = 0.0;
  /// max over non-core cells of (psi - q x2 - mu), floored at 0.
  double max_violation = 0.0;
};

/// mu = min over the core of psi - q x2.
MultiplierReport multiplier(const ScalarField& zeta, const ScalarField& psi, double q);
MultiplierReport multiplier(const MaximizerResult& r, double q);

/// Cells whose value is below that of some cell with strictly smaller phi.
std::size_t monotone_fit(const ScalarField& zeta, const ScalarField& phi);
std::size_t monotone_fit(const MaximizerResult& r);

/// h^2 sum zeta (psi - q x2 - mu).
double core_energy(const MaximizerResult& r, double q);

/// iteration,objective,mu,support_size
void write_iteration_log(const MaximizerResult& r, const std::filesystem::path& path);

}  // namespace vp
