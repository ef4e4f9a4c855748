#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "vortexpair/kernel.hpp"
#include "vortexpair/solver.hpp"

namespace vp {

/// Dynamics failure (CFL violation, support reaching the window edge).
class DynamicsError : public Error {
 public:
  using Error::Error;
};

struct EvolutionState {
  ScalarField omega;
  double t = 0.0;
  double dt = 0.0;
  double mass0 = 0.0;
  double impulse0 = 0.0;
  double energy0 = 0.0;
};

/// Semi-Lagrangian half-plane Euler stepper on one grid.
///
/// Each step freezes v = (d2 G omega, -d1 G omega), traces every cell center
/// back with the midpoint rule x* = x - dt v(x - dt/2 v(x)), and sets
/// omega(x) to the bilinear interpolant at x*. Below the first row the
/// interpolant uses a ghost row from the wall reflection (omega and v1 even,
/// v2 odd); outside the window omega is zero.
class Evolver {
 public:
  explicit Evolver(const Grid& grid);

  const KernelEvaluator& kernel() const { return kernel_; }

  /// State at t = 0 with the conserved diagnostics recorded. dt = 0 picks
  /// cfl * h / (2 max|v|).
  EvolutionState start(const ScalarField& omega, double dt = 0.0, double cfl = 0.9) const;

  /// Throws DynamicsError on a CFL violation (dt > h / (2 max|v|)) or when
  /// omega reaches within two cells of the left, right or top edge.
  EvolutionState step(const EvolutionState& s) const;

 private:
  Grid grid_;
  KernelEvaluator kernel_;
};

/// Largest stable step h / (2 max|v|); infinite for a zero field.
double cfl_limit(const ScalarField& omega, const KernelEvaluator& kernel);

struct TrajectorySample {
  double t = 0.0;
  Point centroid;
  double deviation = 0.0;  ///< min over whole-cell x1 shifts of ||omega - ref||_2; 0 without a reference
  double mass = 0.0;
  double energy = 0.0;
  double impulse = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  EvolutionState final_state;

  double max_mass_drift() const;     ///< max |mass - mass0| / mass0
  double max_energy_drift() const;   ///< relative
  double max_impulse_drift() const;  ///< relative
  double max_deviation() const;
};

struct EvolveOptions {
  double T = 0.0;
  double dt = 0.0;  ///< 0: from the CFL fraction below
  double cfl = 0.9;
  int sample_every = 1;
  const ScalarField* reference = nullptr;  ///< for the deviation column
};

Trajectory evolve(const ScalarField& omega0, const EvolveOptions& opt);

/// min over integer s of ||a - b shifted by s columns||_2; the shifted b
/// keeps its full norm even where it leaves the window.
double translate_distance(const ScalarField& a, const ScalarField& b);

/// Least-squares slope of centroid x1 against t; needs >= 5 samples with
/// distinct times.
double measure_speed(const std::vector<TrajectorySample>& samples);

struct PointVortexSample {
  double t = 0.0;
  Point x;
};

/// Classical RK4 for dx1/dt = kappa / (4 pi x2), dx2/dt = 0 starting at (0, d).
std::vector<PointVortexSample> point_vortex_pair(double kappa, double d, double T, double dt);

/// Slope of x1 against t over the trajectory.
double point_vortex_speed(const std::vector<PointVortexSample>& traj);

/// First positive zero of J1.
inline constexpr double lamb_ka = 3.8317059702075125;

/// Upper half of the Lamb dipole of radius a moving at speed W in +x1,
/// centred at (x1c, 0): omega = -(2 W k / J0(k a)) J1(k r) sin(theta) for
/// r < a, with k a the first zero of J1. Positive in the upper half.
/// Throws "grid too small" unless the disk fits two cells inside the
/// left, right and top edges.
ScalarField lamb_dipole(double a, double W, const Grid& grid, double x1c = 0.0);

enum class PerturbationKind { none, tilt, swap, split };
const char* to_string(PerturbationKind k);
PerturbationKind perturbation_from_string(const std::string& s);

struct Perturbation {
  PerturbationKind kind = PerturbationKind::none;
  /// Target ||omega0 - zeta||_2 as a fraction of ||zeta||_2 (tilt).
  double relative_delta = 0.01;
};

/// tilt: zeta (1 + alpha g) with g the normalized height above the centroid
/// and alpha fixed by the target delta (mass and support preserved).
/// swap: exchange the largest and smallest positive values (delta as it
/// falls out). split: halves x1 < c1 and x1 >= c1 pushed apart by twice the
/// support diameter.
ScalarField perturb(const ScalarField& zeta, const Perturbation& p);

struct StabilityReport {
  Perturbation perturbation;
  double delta = 0.0;  ///< ||omega0 - zeta||_2
  double zeta_norm = 0.0;
  Trajectory trajectory;
  double sup_deviation = 0.0;
};

StabilityReport stability_experiment(const MaximizerResult& zeta, const Perturbation& p, double T,
                                     double cfl = 0.9);

/// t,centroid_x1,centroid_x2,deviation,mass,energy,impulse
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

}  // namespace vp
