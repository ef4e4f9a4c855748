#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vp {

/// Error raised for violated preconditions and failed numerical contracts.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend Point operator-(Point a, Point b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend Point operator*(double s, Point a) { return {s * a.x1, s * a.x2}; }
  friend bool operator==(Point a, Point b) = default;
};

double distance(Point a, Point b);

/// Uniform square-cell lattice. Cell (i, j) has center
/// (x1_min + (i + 1/2) h, x2_min + (j + 1/2) h); storage is row-major with
/// i (the x1 index) running fastest.
///
/// Two flavours are used: half-plane windows [-L, L] x (0, H] with an even
/// column count (mirror-symmetric about the x2 axis), which are the only
/// grids the half-plane kernel accepts, and free "centered" lattices used
/// for rescaled profiles and rearrangement checks.
class Grid {
 public:
  Grid() = default;

  /// Half-plane window; requires 2L/nx == H/ny (square cells) and nx even.
  static Grid half_plane(double half_width, double height, int nx, int ny);
  /// Half-plane window specified by spacing and counts.
  static Grid half_plane_spacing(double h, int nx, int ny);
  /// Lattice whose bounding box is centered at `center`.
  static Grid centered(double h, int nx, int ny, Point center = {});
  /// Lattice with explicit lower-left corner.
  static Grid with_origin(double h, int nx, int ny, Point lower_left);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }
  double cell_area() const { return h_ * h_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_); }
  Point lower_left() const { return {x1_min_, x2_min_}; }
  bool is_half_plane() const { return half_plane_; }

  /// Half-width L of a half-plane window.
  double half_width() const { return 0.5 * nx_ * h_; }
  /// Height H of a half-plane window.
  double height() const { return ny_ * h_; }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i);
  }
  int col(std::size_t k) const { return static_cast<int>(k % static_cast<std::size_t>(nx_)); }
  int row(std::size_t k) const { return static_cast<int>(k / static_cast<std::size_t>(nx_)); }

  double x1(int i) const { return x1_min_ + (i + 0.5) * h_; }
  double x2(int j) const { return x2_min_ + (j + 0.5) * h_; }
  Point center(int i, int j) const { return {x1(i), x2(j)}; }
  Point center(std::size_t k) const { return center(col(k), row(k)); }

  /// Index of the cell mirrored about x1 = 0. Only valid on grids symmetric
  /// about the x2 axis.
  std::size_t mirror_index(std::size_t k) const { return index(nx_ - 1 - col(k), row(k)); }
  bool mirror_symmetric() const;

  /// Cell containing p, or -1 when p lies outside the lattice.
  long locate(Point p) const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int nx_ = 0;
  int ny_ = 0;
  double h_ = 0.0;
  double x1_min_ = 0.0;
  double x2_min_ = 0.0;
  bool half_plane_ = false;
};

enum class FieldKind { vorticity, stream, generic };

const char* to_string(FieldKind kind);
FieldKind field_kind_from_string(const std::string& s);

/// Cell-centered scalar values on a grid. Integrals use the midpoint rule with
/// weight h^2 everywhere.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(Grid grid, FieldKind kind);
  ScalarField(Grid grid, std::vector<double> values, FieldKind kind);

  const Grid& grid() const { return grid_; }
  FieldKind kind() const { return kind_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::size_t size() const { return values_.size(); }

  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double& at(int i, int j) { return values_[grid_.index(i, j)]; }
  double at(int i, int j) const { return values_[grid_.index(i, j)]; }

  double integral() const;
  double max() const;
  /// Throws unless all values are finite and, for vorticity fields, nonnegative.
  void validate() const;

  /// f(-x1, x2) on a mirror-symmetric grid.
  ScalarField mirrored() const;
  ScalarField with_kind(FieldKind kind) const;
  ScalarField scaled(double s) const;

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  Grid grid_;
  std::vector<double> values_;
  FieldKind kind_ = FieldKind::generic;
};

/// Distinct cell indices on a grid.
struct CellSet {
  Grid grid;
  std::vector<std::size_t> cells;

  bool empty() const { return cells.empty(); }
  std::size_t size() const { return cells.size(); }
};

/// Cells with value strictly greater than tau.
CellSet support(const ScalarField& f, double tau = 0.0);

/// Largest pairwise distance between cell centers; throws on an empty set.
double diameter(const CellSet& s);

/// Mass-weighted mean of cell centers; throws when the total mass is zero.
Point centroid(const ScalarField& f);

/// (h^2 sum |v|^p)^(1/p), or max |v| for p = infinity. Requires p >= 1.
double lp_norm(const ScalarField& f, double p);
double lp_distance(const ScalarField& a, const ScalarField& b, double p);

/// ||f - mirror f||_1 / ||f||_1.
double asymmetry(const ScalarField& f);

/// Cells whose center lies within `margin` cells of the left, right or top
/// window edge. The x2 = 0 edge is the physical wall and is never reported.
bool touches_window_edge(const ScalarField& f, int margin = 2);

}  // namespace vp
