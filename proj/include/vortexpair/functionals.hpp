#pragma once

#include "vortexpair/grid.hpp"
#include "vortexpair/kernel.hpp"
#include "vortexpair/profiles.hpp"

namespace vp {

/// E(f) = 1/2 h^2 sum f_i psi_i with psi = G f.
double energy(const ScalarField& f, const KernelEvaluator& kernel);
/// Same, with a precomputed stream function.
double energy(const ScalarField& f, const ScalarField& psi);

/// I(f) = h^2 sum x2_i f_i.
double impulse(const ScalarField& f);

/// (E - q I)(f).
double objective(const ScalarField& f, double q, const KernelEvaluator& kernel);

/// E - q I on one grid, with the potential psi - q x2 that drives the ascent.
class PenalizedObjective {
 public:
  PenalizedObjective(double q, KernelEvaluator kernel);

  double q() const { return q_; }
  const KernelEvaluator& kernel() const { return kernel_; }

  double operator()(const ScalarField& f) const;
  double value(const ScalarField& f, const ScalarField& psi) const;
  /// psi - q x2.
  ScalarField potential(const ScalarField& psi) const;

 private:
  double q_;
  KernelEvaluator kernel_;
};

/// rho^eps(x) = eps^-2 rho((x - center) / eps) sampled at the cell centers of
/// `target`, renormalized so the integral is kappa exactly. Requires
/// 0 < eps <= 1; analytic profiles need h <= eps a / 2, sampled profiles
/// h <= eps h_ref.
ScalarField scale_profile(const ReferenceProfile& rho, double eps, const Grid& target, Point center = {});
/// Variant for a reference profile given as samples on its own lattice
/// (nearest-sample lookup).
ScalarField scale_profile(const ScalarField& rho, double eps, const Grid& target, Point center = {});

/// w(x) = eps^2 v(eps x) on `w_grid`, by exact area-weighted remapping of the
/// piecewise-constant v. Mass and impulse/eps are preserved exactly whenever
/// the image of w_grid covers the support of v.
ScalarField unit_scale(const ScalarField& v, double eps, const Grid& w_grid);

struct ScalingIdentityReport {
  double lhs = 0.0;   ///< (E - q I)(v)
  double rhs = 0.0;   ///< (E - eps q I)(w)
  double discrepancy = 0.0;  ///< |lhs - rhs| / |lhs|
  Grid w_grid;
};

/// Evaluates both sides of (E - qI)(v) = (E - eps q I)(w), w(x) = eps^2 v(eps x).
/// w lives on a half-plane grid of spacing h / (subdivision * eps), so each
/// cell of v is split into subdivision^2 cells of w; with subdivision = 1 the
/// two discretizations coincide and the discrepancy is rounding only.
ScalingIdentityReport scaling_identity_check(const ScalarField& v, double eps, double q, int subdivision = 2);

}  // namespace vp
