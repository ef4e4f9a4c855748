#include "vortexpair/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vp {

double distance(Point a, Point b) { return std::hypot(a.x1 - b.x1, a.x2 - b.x2); }

Grid Grid::half_plane(double half_width, double height, int nx, int ny) {
  if (nx <= 0 || ny <= 0) throw Error("grid: cell counts must be positive");
  if (nx % 2 != 0) throw Error("grid: nx must be even for a mirror-symmetric window");
  if (!(half_width > 0.0) || !(height > 0.0)) throw Error("grid: window extents must be positive");
  const double hx = 2.0 * half_width / nx;
  const double hy = height / ny;
  if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy)) throw Error("grid: cells are not square (2L/nx != H/ny)");
  return half_plane_spacing(hx, nx, ny);
}

Grid Grid::half_plane_spacing(double h, int nx, int ny) {
  if (nx <= 0 || ny <= 0) throw Error("grid: cell counts must be positive");
  if (nx % 2 != 0) throw Error("grid: nx must be even for a mirror-symmetric window");
  if (!(h > 0.0)) throw Error("grid: spacing must be positive");
  Grid g;
  g.nx_ = nx;
  g.ny_ = ny;
  g.h_ = h;
  g.x1_min_ = -0.5 * nx * h;
  g.x2_min_ = 0.0;
  g.half_plane_ = true;
  return g;
}

Grid Grid::centered(double h, int nx, int ny, Point center) {
  return with_origin(h, nx, ny, {center.x1 - 0.5 * nx * h, center.x2 - 0.5 * ny * h});
}

Grid Grid::with_origin(double h, int nx, int ny, Point lower_left) {
  if (nx <= 0 || ny <= 0) throw Error("grid: cell counts must be positive");
  if (!(h > 0.0)) throw Error("grid: spacing must be positive");
  Grid g;
  g.nx_ = nx;
  g.ny_ = ny;
  g.h_ = h;
  g.x1_min_ = lower_left.x1;
  g.x2_min_ = lower_left.x2;
  g.half_plane_ = false;
  return g;
}

bool Grid::mirror_symmetric() const {
  return std::abs(x1_min_ + 0.5 * nx_ * h_) <= 1e-12 * std::max(1.0, nx_ * h_);
}

long Grid::locate(Point p) const {
  const double fi = std::floor((p.x1 - x1_min_) / h_);
  const double fj = std::floor((p.x2 - x2_min_) / h_);
  if (fi < 0 || fj < 0 || fi >= nx_ || fj >= ny_) return -1;
  return static_cast<long>(index(static_cast<int>(fi), static_cast<int>(fj)));
}

const char* to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::vorticity: return "vorticity";
    case FieldKind::stream: return "stream";
    case FieldKind::generic: return "generic";
  }
  return "generic";
}

FieldKind field_kind_from_string(const std::string& s) {
  if (s == "vorticity") return FieldKind::vorticity;
  if (s == "stream") return FieldKind::stream;
  if (s == "generic") return FieldKind::generic;
  throw Error("unknown field kind '" + s + "'");
}

ScalarField::ScalarField(Grid grid, FieldKind kind)
    : grid_(grid), values_(grid.size(), 0.0), kind_(kind) {}

ScalarField::ScalarField(Grid grid, std::vector<double> values, FieldKind kind)
    : grid_(grid), values_(std::move(values)), kind_(kind) {
  if (values_.size() != grid_.size()) throw Error("field: value count does not match grid");
  validate();
}

double ScalarField::integral() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * grid_.cell_area();
}

double ScalarField::max() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::max(m, v);
  return m;
}

void ScalarField::validate() const {
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error("field: non-finite value");
    if (kind_ == FieldKind::vorticity && v < 0.0) throw Error("field: negative vorticity");
  }
}

ScalarField ScalarField::mirrored() const {
  if (!grid_.mirror_symmetric()) throw Error("field: grid is not symmetric about the x2 axis");
  ScalarField out(grid_, kind_);
  for (std::size_t k = 0; k < values_.size(); ++k) out.values_[grid_.mirror_index(k)] = values_[k];
  return out;
}

ScalarField ScalarField::with_kind(FieldKind kind) const {
  ScalarField out = *this;
  out.kind_ = kind;
  return out;
}

ScalarField ScalarField::scaled(double s) const {
  ScalarField out = *this;
  for (double& v : out.values_) v *= s;
  return out;
}

CellSet support(const ScalarField& f, double tau) {
  CellSet s{f.grid(), {}};
  for (std::size_t k = 0; k < f.size(); ++k)
    if (f[k] > tau) s.cells.push_back(k);
  return s;
}

namespace {

double cross(Point o, Point a, Point b) {
  return (a.x1 - o.x1) * (b.x2 - o.x2) - (a.x2 - o.x2) * (b.x1 - o.x1);
}

// Andrew's monotone chain; collinear points dropped.
std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return a.x1 < b.x1 || (a.x1 == b.x1 && a.x2 < b.x2); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

double diameter(const CellSet& s) {
  if (s.empty()) throw Error("empty support");
  std::vector<Point> pts;
  pts.reserve(s.size());
  for (std::size_t k : s.cells) pts.push_back(s.grid.center(k));
  const auto hull = convex_hull(std::move(pts));
  double d = 0.0;
  for (std::size_t a = 0; a < hull.size(); ++a)
    for (std::size_t b = a + 1; b < hull.size(); ++b) d = std::max(d, distance(hull[a], hull[b]));
  return d;
}

Point centroid(const ScalarField& f) {
  const Grid& g = f.grid();
  double m = 0.0, s1 = 0.0, s2 = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    const double x2 = g.x2(j);
    for (int i = 0; i < g.nx(); ++i) {
      const double v = f.at(i, j);
      m += v;
      s1 += v * g.x1(i);
      s2 += v * x2;
    }
  }
  if (m == 0.0) throw Error("centroid: zero total mass");
  // Pair mirror columns before summing so an even field yields exactly 0.
  if (g.mirror_symmetric()) {
    s1 = 0.0;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = g.nx() / 2; i < g.nx(); ++i) s1 += (f.at(i, j) - f.at(g.nx() - 1 - i, j)) * g.x1(i);
  }
  return {s1 / m, s2 / m};
}

double lp_norm(const ScalarField& f, double p) {
  if (!(p >= 1.0)) throw Error("lp_norm: p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  for (double v : f.values()) s += std::pow(std::abs(v), p);
  return std::pow(s * f.grid().cell_area(), 1.0 / p);
}

double lp_distance(const ScalarField& a, const ScalarField& b, double p) {
  if (!(a.grid() == b.grid())) throw Error("lp_distance: fields live on different grids");
  ScalarField d(a.grid(), FieldKind::generic);
  for (std::size_t k = 0; k < a.size(); ++k) d[k] = a[k] - b[k];
  return lp_norm(d, p);
}

double asymmetry(const ScalarField& f) {
  const ScalarField m = f.mirrored();
  double diff = 0.0, total = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    diff += std::abs(f[k] - m[k]);
    total += std::abs(f[k]);
  }
  return total > 0.0 ? diff / total : 0.0;
}

bool touches_window_edge(const ScalarField& f, int margin) {
  const Grid& g = f.grid();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (f.at(i, j) <= 0.0) continue;
      if (i < margin || i >= g.nx() - margin || j >= g.ny() - margin) return true;
    }
  return false;
}

}  // namespace vp
