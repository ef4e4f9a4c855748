#include "vortexpair/functionals.hpp"

#include <algorithm>
#include <cmath>

namespace vp {

double energy(const ScalarField& f, const ScalarField& psi) {
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += f[k] * psi[k];
  return 0.5 * f.grid().cell_area() * s;
}

double energy(const ScalarField& f, const KernelEvaluator& kernel) { return energy(f, kernel.apply_G(f)); }

double impulse(const ScalarField& f) {
  const Grid& g = f.grid();
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    double row = 0.0;
    for (int i = 0; i < g.nx(); ++i) row += f.at(i, j);
    s += g.x2(j) * row;
  }
  return g.cell_area() * s;
}

double objective(const ScalarField& f, double q, const KernelEvaluator& kernel) {
  return energy(f, kernel) - q * impulse(f);
}

PenalizedObjective::PenalizedObjective(double q, KernelEvaluator kernel) : q_(q), kernel_(std::move(kernel)) {
  if (!(q > 0.0)) throw Error("objective: q must be positive");
}

double PenalizedObjective::operator()(const ScalarField& f) const { return objective(f, q_, kernel_); }

double PenalizedObjective::value(const ScalarField& f, const ScalarField& psi) const {
  return energy(f, psi) - q_ * impulse(f);
}

ScalarField PenalizedObjective::potential(const ScalarField& psi) const {
  ScalarField phi = psi.with_kind(FieldKind::generic);
  const Grid& g = psi.grid();
  for (int j = 0; j < g.ny(); ++j) {
    const double shift = q_ * g.x2(j);
    for (int i = 0; i < g.nx(); ++i) phi.at(i, j) -= shift;
  }
  return phi;
}

namespace {

ScalarField sample_scaled(const std::function<double(Point)>& rho, double kappa, double eps, const Grid& target,
                          Point center) {
  const double inv = 1.0 / eps;
  const double amp = inv * inv;
  ScalarField f(target, FieldKind::vorticity);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = amp * rho(inv * (target.center(k) - center));
  const double m = f.integral();
  if (!(m > 0.0)) throw Error("scale_profile: scaled profile misses every target cell");
  return f.scaled(kappa / m);
}

void check_eps(double eps) {
  if (!(eps > 0.0) || eps > 1.0) throw Error("scale_profile: eps must lie in (0, 1]");
}

}  // namespace

ScalarField scale_profile(const ReferenceProfile& rho, double eps, const Grid& target, Point center) {
  check_eps(eps);
  if (rho.samples()) return scale_profile(*rho.samples(), eps, target, center);
  if (target.h() > 0.5 * eps * rho.radius() * (1.0 + 1e-12))
    throw Error("scale_profile: target grid too coarse for eps");
  return sample_scaled([&rho](Point x) { return rho(x); }, rho.kappa(), eps, target, center);
}

ScalarField scale_profile(const ScalarField& rho, double eps, const Grid& target, Point center) {
  check_eps(eps);
  if (target.h() > eps * rho.grid().h() * (1.0 + 1e-12)) throw Error("scale_profile: target grid too coarse for eps");
  const Grid& ref = rho.grid();
  return sample_scaled(
      [&](Point x) {
        const long k = ref.locate(x);
        return k < 0 ? 0.0 : rho[static_cast<std::size_t>(k)];
      },
      rho.integral(), eps, target, center);
}

ScalarField unit_scale(const ScalarField& v, double eps, const Grid& w_grid) {
  if (!(eps > 0.0)) throw Error("unit_scale: eps must be positive");
  const Grid& g = v.grid();
  const double hv = g.h();
  const Point o = g.lower_left();
  const double hw = w_grid.h();
  const double inv_area = 1.0 / w_grid.cell_area();
  ScalarField w(w_grid, v.kind());

  for (int jw = 0; jw < w_grid.ny(); ++jw) {
    // Preimage of the w cell in v coordinates: [a1, b1] x [a2, b2].
    const double a2 = eps * (w_grid.lower_left().x2 + jw * hw);
    const double b2 = eps * (w_grid.lower_left().x2 + (jw + 1) * hw);
    const int j0 = std::max(0, static_cast<int>(std::floor((a2 - o.x2) / hv)));
    const int j1 = std::min(g.ny() - 1, static_cast<int>(std::floor((b2 - o.x2) / hv)));
    for (int iw = 0; iw < w_grid.nx(); ++iw) {
      const double a1 = eps * (w_grid.lower_left().x1 + iw * hw);
      const double b1 = eps * (w_grid.lower_left().x1 + (iw + 1) * hw);
      const int i0 = std::max(0, static_cast<int>(std::floor((a1 - o.x1) / hv)));
      const int i1 = std::min(g.nx() - 1, static_cast<int>(std::floor((b1 - o.x1) / hv)));
      double s = 0.0;
      for (int j = j0; j <= j1; ++j) {
        const double oy = std::min(b2, o.x2 + (j + 1) * hv) - std::max(a2, o.x2 + j * hv);
        if (oy <= 0.0) continue;
        for (int i = i0; i <= i1; ++i) {
          const double val = v.at(i, j);
          if (val == 0.0) continue;
          const double ox = std::min(b1, o.x1 + (i + 1) * hv) - std::max(a1, o.x1 + i * hv);
          if (ox <= 0.0) continue;
          s += val * ox * oy;
        }
      }
      w.at(iw, jw) = s * inv_area;
    }
  }
  return w;
}

ScalingIdentityReport scaling_identity_check(const ScalarField& v, double eps, double q, int subdivision) {
  if (subdivision < 1) throw Error("scaling_identity_check: subdivision must be >= 1");
  const Grid& g = v.grid();
  if (!g.is_half_plane()) throw Error("scaling_identity_check: field must live on a half-plane grid");
  const CellSet s = support(v);
  if (s.empty()) throw Error("scaling_identity_check: zero field");

  double reach1 = 0.0, reach2 = 0.0;
  for (std::size_t k : s.cells) {
    const Point c = g.center(k);
    reach1 = std::max(reach1, std::abs(c.x1) + 0.5 * g.h());
    reach2 = std::max(reach2, c.x2 + 0.5 * g.h());
  }
  const double hw = g.h() / (subdivision * eps);
  const int nx = 2 * (static_cast<int>(std::ceil(reach1 / eps / hw - 1e-9)) + 1);
  const int ny = static_cast<int>(std::ceil(reach2 / eps / hw - 1e-9)) + 1;
  const Grid wg = Grid::half_plane_spacing(hw, nx, ny);
  const ScalarField w = unit_scale(v, eps, wg);

  ScalingIdentityReport r;
  r.w_grid = wg;
  r.lhs = objective(v, q, KernelEvaluator(g));
  r.rhs = objective(w, eps * q, KernelEvaluator(wg));
  r.discrepancy = std::abs(r.lhs - r.rhs) / std::max(std::abs(r.lhs), 1e-300);
  return r;
}

}  // namespace vp
