#pragma once

#include <memory>
#include <vector>

#include "vortexpair/grid.hpp"

namespace vp {

/// Half-plane Green's function (1/2pi) ln(|x - ybar| / |x - y|), ybar = (y1, -y2).
/// Throws "kernel singularity" when x == y.
double green(Point x, Point y);

/// Gradient of green() with respect to x.
Point green_gradient(Point x, Point y);

/// Integral of ln(1/|y|) over the disk with the area of an h x h cell:
/// h^2 (1/2 - ln(h / sqrt(pi))).
double self_cell_integral(double h);

enum class KernelMode { direct, fast };

struct VelocityField {
  Grid grid;
  std::vector<double> v1;
  std::vector<double> v2;

  double max_speed() const;
};

class LatticeConvolver;

/// The operator psi = G zeta on one half-plane grid, discretized by the
/// midpoint rule off the diagonal and an equal-area-disk self term:
///
///   psi_i = h^2 sum_{j != i} G(c_i, c_j) v_j + v_i / (2 pi) (S + h^2 ln(2 x2_i)),
///   S = self_cell_integral(h).
///
/// The direct path sums green() literally; the fast path evaluates the same
/// sum as a free-space lattice convolution plus an image lattice convolution
/// (x1 - y1, x2 + y2) on a zero-padded 2nx x 2ny lattice.
///
/// Velocities come from the analytic kernel gradient with the same image
/// term; the free-space self contribution is zero.
class KernelEvaluator {
 public:
  explicit KernelEvaluator(const Grid& grid, KernelMode mode = KernelMode::fast);
  ~KernelEvaluator();
  KernelEvaluator(const KernelEvaluator&);
  KernelEvaluator& operator=(const KernelEvaluator&);
  KernelEvaluator(KernelEvaluator&&) noexcept;
  KernelEvaluator& operator=(KernelEvaluator&&) noexcept;

  const Grid& grid() const { return grid_; }
  KernelMode mode() const { return mode_; }
  double self_cell_constant() const { return self_cell_constant_; }

  /// Diagonal weight psi_i / v_i contributed by cell row j.
  double diagonal(int row) const;

  ScalarField apply_G(const ScalarField& f) const;
  ScalarField apply_G_direct(const ScalarField& f) const;
  ScalarField fast_apply_G(const ScalarField& f) const;

  VelocityField velocity(const ScalarField& f) const;
  VelocityField velocity_direct(const ScalarField& f) const;
  VelocityField velocity_fast(const ScalarField& f) const;

  /// Direct sum of h^2 G(x, c_j) v_j at an arbitrary point; cells whose center
  /// coincides with x use the self term.
  double stream_at(const ScalarField& f, Point x) const;

 private:
  void check_field(const ScalarField& f) const;
  const LatticeConvolver& convolver() const;

  Grid grid_;
  KernelMode mode_;
  double self_cell_constant_;
  std::shared_ptr<const LatticeConvolver> conv_;
};

}  // namespace vp
