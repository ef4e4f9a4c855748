#pragma once

#include <vector>

#include "vortexpair/grid.hpp"

namespace vp {

/// Sorted (descending) multiset of cell values on equal-area cells: the
/// discrete rearrangement class.
struct MassProfile {
  std::vector<double> values;
  double cell_area = 0.0;

  std::size_t size() const { return values.size(); }
  double mass() const;
  std::size_t positive_count() const;

  friend bool operator==(const MassProfile&, const MassProfile&) = default;
};

/// Descending sort of the field values; throws on negative values.
MassProfile profile_of(const ScalarField& f);

/// Profile padded with zeros (or checked) to exactly n entries; throws if it
/// holds more than n positive values.
MassProfile resize_profile(const MassProfile& p, std::size_t n);

/// Largest profile value on the cell closest to `center`, next largest on the
/// next closest, and so on. Ties in distance go to smaller x2, then smaller
/// x1. Throws "grid too small" when the grid has fewer cells than the profile
/// has positive values.
ScalarField symmetric_decreasing(const MassProfile& p, const Grid& grid, Point center = {});

/// Cell order used by maximize_linear: phi descending; equal phi grouped in
/// mirror pairs (|x1| ascending, then x2 ascending, then x1 >= 0 first).
std::vector<std::size_t> linear_order(const ScalarField& phi);

/// The member of the class of p maximizing h^2 sum v_i phi_i: the k-th
/// largest profile value goes to the cell with the k-th largest phi.
/// Requires p.size() == number of grid cells. phi may hold -infinity.
ScalarField maximize_linear(const MassProfile& p, const ScalarField& phi);

/// Per row, the even and decreasing-in-|x1| rearrangement averaged over
/// cells (sorted values on half-cells about x1 = 0). Row sums are preserved;
/// requires a mirror-symmetric grid.
ScalarField steiner_symmetrize(const ScalarField& f);

/// h^2 sum u v <= h^2 sum u* v* with u*, v* symmetric-decreasing on the same
/// lattice. Returns true when the inequality holds (relative slack 1e-12).
bool hardy_littlewood_check(const ScalarField& u, const ScalarField& v);

/// Discrete Riesz triple sum sum_{x,y} u(x) k(x - y) w(y) for a kernel given
/// on lattice offsets.
using LatticeKernel = double (*)(int di, int dj, double h);
double riesz_sum(const ScalarField& u, LatticeKernel k, const ScalarField& w);

/// riesz_sum(u, k, w) <= riesz_sum(u*, k, w*) for a radially decreasing k,
/// rearrangements about the lattice center.
bool riesz_check(const ScalarField& u, LatticeKernel k, const ScalarField& w);

/// ln(1/|d|) truncated at zero beyond |d| = 1, with the equal-area disk mean
/// 1/2 - ln(h / sqrt(pi)) at the origin.
double truncated_log_kernel(int di, int dj, double h);

}  // namespace vp
