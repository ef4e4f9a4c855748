#include "vortexpair/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace vp {

double MassProfile::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * cell_area;
}

std::size_t MassProfile::positive_count() const {
  return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](double v) { return v > 0.0; }));
}

MassProfile profile_of(const ScalarField& f) {
  MassProfile p;
  p.cell_area = f.grid().cell_area();
  p.values.assign(f.values().begin(), f.values().end());
  for (double v : p.values)
    if (v < 0.0 || !std::isfinite(v)) throw Error("profile_of: negative or non-finite value");
  std::sort(p.values.begin(), p.values.end(), std::greater<>());
  return p;
}

MassProfile resize_profile(const MassProfile& p, std::size_t n) {
  if (p.positive_count() > n) throw Error("profile has more positive values than the grid has cells");
  MassProfile out = p;
  out.values.resize(n, 0.0);
  return out;
}

ScalarField symmetric_decreasing(const MassProfile& p, const Grid& grid, Point center) {
  if (p.positive_count() > grid.size()) throw Error("symmetric_decreasing: grid too small");
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> r2(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Point d = grid.center(k) - center;
    r2[k] = d.x1 * d.x1 + d.x2 * d.x2;
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (r2[a] != r2[b]) return r2[a] < r2[b];
    const Point ca = grid.center(a), cb = grid.center(b);
    if (ca.x2 != cb.x2) return ca.x2 < cb.x2;
    return ca.x1 < cb.x1;
  });
  ScalarField out(grid, FieldKind::vorticity);
  const std::size_t n = std::min(order.size(), p.values.size());
  for (std::size_t k = 0; k < n; ++k) out[order[k]] = p.values[k];
  return out;
}

std::vector<std::size_t> linear_order(const ScalarField& phi) {
  const Grid& g = phi.grid();
  std::vector<std::size_t> order(phi.size());
  std::iota(order.begin(), order.end(), 0);
  // Mirror-pair tie-break: column distance from the axis, in half-cell units.
  auto axis_rank = [&g](std::size_t k) {
    const int i = g.col(k);
    return std::abs(2 * i + 1 - g.nx());
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (phi[a] != phi[b]) return phi[a] > phi[b];
    const int ra = axis_rank(a), rb = axis_rank(b);
    if (ra != rb) return ra < rb;
    const int ja = g.row(a), jb = g.row(b);
    if (ja != jb) return ja < jb;
    // Right half (x1 >= 0) first.
    return g.col(a) > g.col(b);
  });
  return order;
}

ScalarField maximize_linear(const MassProfile& p, const ScalarField& phi) {
  if (p.size() != phi.size()) throw Error("maximize_linear: profile size does not match grid");
  const auto order = linear_order(phi);
  ScalarField out(phi.grid(), FieldKind::vorticity);
  for (std::size_t k = 0; k < order.size(); ++k) out[order[k]] = p.values[k];
  return out;
}

ScalarField steiner_symmetrize(const ScalarField& f) {
  const Grid& g = f.grid();
  if (!g.mirror_symmetric() || g.nx() % 2 != 0)
    throw Error("steiner_symmetrize: grid is not symmetric about the x2 axis");
  ScalarField out(g, f.kind());
  const int half = g.nx() / 2;
  std::vector<double> row(g.nx());
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) row[i] = f.at(i, j);
    std::sort(row.begin(), row.end(), std::greater<>());
    // Sorted values fill half-cells outward from x1 = 0 on both sides; the
    // pair (row[2m], row[2m+1]) shares the cell at distance m from the axis.
    for (int m = 0; m < half; ++m) {
      const double avg = 0.5 * (row[2 * m] + row[2 * m + 1]);
      out.at(half + m, j) = avg;
      out.at(half - 1 - m, j) = avg;
    }
  }
  return out;
}

bool hardy_littlewood_check(const ScalarField& u, const ScalarField& v) {
  if (!(u.grid() == v.grid())) throw Error("hardy_littlewood_check: grids differ");
  const Grid& g = u.grid();
  const Point c = g.lower_left() + Point{0.5 * g.nx() * g.h(), 0.5 * g.ny() * g.h()};
  const ScalarField us = symmetric_decreasing(profile_of(u), g, c);
  const ScalarField vs = symmetric_decreasing(profile_of(v), g, c);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    lhs += u[k] * v[k];
    rhs += us[k] * vs[k];
  }
  lhs *= g.cell_area();
  rhs *= g.cell_area();
  return lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs));
}

double truncated_log_kernel(int di, int dj, double h) {
  if (di == 0 && dj == 0) return std::max(0.0, 0.5 - std::log(h / std::sqrt(std::numbers::pi)));
  const double r = h * std::sqrt(double(di * di + dj * dj));
  return r < 1.0 ? -std::log(r) : 0.0;
}

double riesz_sum(const ScalarField& u, LatticeKernel k, const ScalarField& w) {
  if (!(u.grid() == w.grid())) throw Error("riesz_sum: grids differ");
  const Grid& g = u.grid();
  double s = 0.0;
  for (std::size_t a = 0; a < u.size(); ++a) {
    if (u[a] == 0.0) continue;
    for (std::size_t b = 0; b < w.size(); ++b) {
      if (w[b] == 0.0) continue;
      s += u[a] * k(g.col(a) - g.col(b), g.row(a) - g.row(b), g.h()) * w[b];
    }
  }
  const double h2 = g.cell_area();
  return s * h2 * h2;
}

bool riesz_check(const ScalarField& u, LatticeKernel k, const ScalarField& w) {
  const Grid& g = u.grid();
  const Point c = g.lower_left() + Point{0.5 * g.nx() * g.h(), 0.5 * g.ny() * g.h()};
  const double lhs = riesz_sum(u, k, w);
  const double rhs = riesz_sum(symmetric_decreasing(profile_of(u), g, c), k, symmetric_decreasing(profile_of(w), g, c));
  return lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs));
}

}  // namespace vp
