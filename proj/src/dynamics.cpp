#include "vortexpair/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "vortexpair/field_io.hpp"
#include "vortexpair/functionals.hpp"

namespace vp {

namespace {

enum class Outside { zero, clamp };

// Bilinear interpolant of cell-centred values at x. parity is the sign of
// the wall reflection (+1 even, -1 odd).
double interpolate(const Grid& g, std::span<const double> v, Point x, double parity, Outside outside) {
  double sign = 1.0;
  if (x.x2 < 0.0) {
    x.x2 = -x.x2;
    sign = parity;
  }
  const double fx = (x.x1 - g.lower_left().x1) / g.h() - 0.5;
  const double fy = (x.x2 - g.lower_left().x2) / g.h() - 0.5;
  const int i0 = static_cast<int>(std::floor(fx));
  const int j0 = static_cast<int>(std::floor(fy));
  const double tx = fx - i0, ty = fy - j0;

  auto at = [&](int i, int j) -> double {
    double s = 1.0;
    if (j < 0) {
      j = -1 - j;
      s = parity;
    }
    if (outside == Outside::zero) {
      if (i < 0 || i >= g.nx() || j >= g.ny()) return 0.0;
    } else {
      i = std::clamp(i, 0, g.nx() - 1);
      j = std::min(j, g.ny() - 1);
    }
    return s * v[g.index(i, j)];
  };

  const double a = (1.0 - tx) * at(i0, j0) + tx * at(i0 + 1, j0);
  const double b = (1.0 - tx) * at(i0, j0 + 1) + tx * at(i0 + 1, j0 + 1);
  return sign * ((1.0 - ty) * a + ty * b);
}

bool near_edge(const ScalarField& f, int margin) {
  const Grid& g = f.grid();
  const double tau = 1e-10 * f.max();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!(f.at(i, j) > tau)) continue;
      if (i < margin || i >= g.nx() - margin || j >= g.ny() - margin) return true;
    }
  return false;
}

}  // namespace

double cfl_limit(const ScalarField& omega, const KernelEvaluator& kernel) {
  const double vmax = kernel.velocity(omega).max_speed();
  if (!(vmax > 0.0)) return std::numeric_limits<double>::infinity();
  return omega.grid().h() / (2.0 * vmax);
}

Evolver::Evolver(const Grid& grid) : grid_(grid), kernel_(grid, KernelMode::fast) {}

EvolutionState Evolver::start(const ScalarField& omega, double dt, double cfl) const {
  if (!(omega.grid() == grid_)) throw DynamicsError("evolve: field lives on a different grid");
  omega.validate();
  EvolutionState s;
  s.omega = omega.with_kind(FieldKind::vorticity);
  s.t = 0.0;
  if (dt > 0.0) {
    s.dt = dt;
  } else {
    const double lim = cfl_limit(omega, kernel_);
    s.dt = std::isfinite(lim) ? cfl * lim : grid_.h();
  }
  s.mass0 = omega.integral();
  s.impulse0 = impulse(omega);
  s.energy0 = energy(omega, kernel_);
  return s;
}

EvolutionState Evolver::step(const EvolutionState& s) const {
  const Grid& g = grid_;
  const VelocityField vel = kernel_.velocity(s.omega);
  const double vmax = vel.max_speed();
  if (s.dt * 2.0 * vmax > g.h() * (1.0 + 1e-12))
    throw DynamicsError("CFL violation: dt = " + format_double(s.dt) + " exceeds h / (2 max|v|) = " +
                        format_double(g.h() / (2.0 * vmax)));

  EvolutionState out = s;
  out.t = s.t + s.dt;
  const std::span<const double> w = s.omega.values();
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Point x = g.center(k);
    const Point xm = x - (0.5 * s.dt) * Point{vel.v1[k], vel.v2[k]};
    const Point um{interpolate(g, vel.v1, xm, 1.0, Outside::clamp), interpolate(g, vel.v2, xm, -1.0, Outside::clamp)};
    const double val = interpolate(g, w, x - s.dt * um, 1.0, Outside::zero);
    out.omega[k] = std::max(0.0, val);
  }
  if (near_edge(out.omega, 2)) throw DynamicsError("support touches boundary");
  return out;
}

double Trajectory::max_mass_drift() const {
  double d = 0.0;
  for (const auto& s : samples) d = std::max(d, std::abs(s.mass - final_state.mass0) / final_state.mass0);
  return d;
}

double Trajectory::max_energy_drift() const {
  double d = 0.0;
  for (const auto& s : samples) d = std::max(d, std::abs(s.energy - final_state.energy0) / std::abs(final_state.energy0));
  return d;
}

double Trajectory::max_impulse_drift() const {
  double d = 0.0;
  for (const auto& s : samples)
    d = std::max(d, std::abs(s.impulse - final_state.impulse0) / std::abs(final_state.impulse0));
  return d;
}

double Trajectory::max_deviation() const {
  double d = 0.0;
  for (const auto& s : samples) d = std::max(d, s.deviation);
  return d;
}

double translate_distance(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) throw Error("translate_distance: grids differ");
  const Grid& g = a.grid();
  double na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  const CellSet sa = support(a);
  double best_inner = 0.0;
  for (int s = -g.nx() + 1; s < g.nx(); ++s) {
    double inner = 0.0;
    for (std::size_t k : sa.cells) {
      const int i = g.col(k) - s;
      if (i < 0 || i >= g.nx()) continue;
      inner += a[k] * b.at(i, g.row(k));
    }
    best_inner = std::max(best_inner, inner);
  }
  return std::sqrt(std::max(0.0, g.cell_area() * (na + nb - 2.0 * best_inner)));
}

Trajectory evolve(const ScalarField& omega0, const EvolveOptions& opt) {
  if (!(opt.T >= 0.0)) throw DynamicsError("evolve: T must be nonnegative");
  if (opt.sample_every < 1) throw DynamicsError("evolve: sample stride must be >= 1");
  const Evolver ev(omega0.grid());
  EvolutionState s = ev.start(omega0, opt.dt, opt.cfl);
  const long n = opt.T > 0.0 ? static_cast<long>(std::ceil(opt.T / s.dt - 1e-9)) : 0;
  if (n > 0) s.dt = opt.T / n;

  Trajectory traj;
  auto record = [&](const EvolutionState& st) {
    TrajectorySample smp;
    smp.t = st.t;
    smp.mass = st.omega.integral();
    smp.centroid = smp.mass > 0.0 ? centroid(st.omega) : Point{};
    smp.impulse = impulse(st.omega);
    smp.energy = energy(st.omega, ev.kernel());
    if (opt.reference) smp.deviation = translate_distance(st.omega, *opt.reference);
    traj.samples.push_back(smp);
  };
  record(s);
  for (long k = 1; k <= n; ++k) {
    s = ev.step(s);
    if (k % opt.sample_every == 0 || k == n) record(s);
  }
  traj.final_state = std::move(s);
  return traj;
}

double measure_speed(const std::vector<TrajectorySample>& samples) {
  if (samples.size() < 5) throw DynamicsError("measure_speed: need at least 5 samples");
  double st = 0.0, sx = 0.0;
  for (const auto& s : samples) {
    st += s.t;
    sx += s.centroid.x1;
  }
  const double n = static_cast<double>(samples.size());
  const double mt = st / n, mx = sx / n;
  double stt = 0.0, stx = 0.0;
  for (const auto& s : samples) {
    stt += (s.t - mt) * (s.t - mt);
    stx += (s.t - mt) * (s.centroid.x1 - mx);
  }
  if (!(stt > 0.0)) throw DynamicsError("measure_speed: degenerate time samples");
  return stx / stt;
}

std::vector<PointVortexSample> point_vortex_pair(double kappa, double d, double T, double dt) {
  if (!(d > 0.0)) throw Error("point_vortex_pair: d must be positive");
  if (!(dt > 0.0) || !(T >= 0.0)) throw Error("point_vortex_pair: bad time step");
  auto f = [kappa](Point x) { return Point{kappa / (4.0 * std::numbers::pi * x.x2), 0.0}; };
  const long n = T > 0.0 ? static_cast<long>(std::ceil(T / dt - 1e-9)) : 0;
  const double h = n > 0 ? T / n : 0.0;
  std::vector<PointVortexSample> out{{0.0, {0.0, d}}};
  Point x{0.0, d};
  for (long k = 1; k <= n; ++k) {
    const Point k1 = f(x);
    const Point k2 = f(x + (0.5 * h) * k1);
    const Point k3 = f(x + (0.5 * h) * k2);
    const Point k4 = f(x + h * k3);
    x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.push_back({k * h, x});
  }
  return out;
}

double point_vortex_speed(const std::vector<PointVortexSample>& traj) {
  std::vector<TrajectorySample> s;
  for (const auto& p : traj) s.push_back({p.t, p.x});
  return measure_speed(s);
}

ScalarField lamb_dipole(double a, double W, const Grid& grid, double x1c) {
  if (!(a > 0.0)) throw Error("lamb_dipole: radius must be positive");
  if (!grid.is_half_plane()) throw Error("lamb_dipole: grid must be a half-plane window");
  const double m = 2.0 * grid.h();
  if (x1c - a < -grid.half_width() + m || x1c + a > grid.half_width() - m || a > grid.height() - m)
    throw Error("lamb_dipole: grid too small");
  const double k = lamb_ka / a;
  const double amp = -2.0 * W * k / std::cyl_bessel_j(0.0, lamb_ka);
  ScalarField f(grid, FieldKind::vorticity);
  for (std::size_t c = 0; c < f.size(); ++c) {
    const Point x = grid.center(c);
    const double r = std::hypot(x.x1 - x1c, x.x2);
    if (r >= a) continue;
    f[c] = std::max(0.0, amp * std::cyl_bessel_j(1.0, k * r) * x.x2 / r);
  }
  return f;
}

const char* to_string(PerturbationKind k) {
  switch (k) {
    case PerturbationKind::none: return "none";
    case PerturbationKind::tilt: return "tilt";
    case PerturbationKind::swap: return "swap";
    case PerturbationKind::split: return "split";
  }
  return "none";
}

PerturbationKind perturbation_from_string(const std::string& s) {
  for (auto k : {PerturbationKind::none, PerturbationKind::tilt, PerturbationKind::swap, PerturbationKind::split})
    if (s == to_string(k)) return k;
  throw Error("unknown perturbation '" + s + "'");
}

ScalarField perturb(const ScalarField& zeta, const Perturbation& p) {
  const Grid& g = zeta.grid();
  ScalarField out = zeta;
  switch (p.kind) {
    case PerturbationKind::none: break;
    case PerturbationKind::tilt: {
      const Point c = centroid(zeta);
      double span = 0.0;
      for (std::size_t k = 0; k < zeta.size(); ++k)
        if (zeta[k] > 0.0) span = std::max(span, std::abs(g.center(k).x2 - c.x2));
      if (!(span > 0.0)) throw Error("perturb: support is a single row");
      ScalarField e(g, FieldKind::generic);
      for (std::size_t k = 0; k < zeta.size(); ++k) e[k] = zeta[k] * (g.center(k).x2 - c.x2) / span;
      const double alpha = p.relative_delta * lp_norm(zeta, 2.0) / lp_norm(e, 2.0);
      if (alpha > 1.0) throw Error("perturb: tilt too large to keep the field nonnegative");
      for (std::size_t k = 0; k < out.size(); ++k) out[k] = zeta[k] + alpha * e[k];
      break;
    }
    case PerturbationKind::swap: {
      std::size_t hi = 0, lo = 0;
      bool any = false;
      for (std::size_t k = 0; k < zeta.size(); ++k) {
        if (zeta[k] <= 0.0) continue;
        if (!any || zeta[k] > zeta[hi]) hi = k;
        if (!any || zeta[k] < zeta[lo]) lo = k;
        any = true;
      }
      if (!any) throw Error("perturb: zero field");
      std::swap(out[hi], out[lo]);
      break;
    }
    case PerturbationKind::split: {
      const CellSet s = support(zeta);
      if (s.empty()) throw Error("perturb: zero field");
      const double c1 = centroid(zeta).x1;
      const int shift = static_cast<int>(std::ceil(2.0 * diameter(s) / g.h()));
      out = ScalarField(g, zeta.kind());
      for (std::size_t k : s.cells) {
        const int i = g.col(k) + (g.center(k).x1 < c1 ? -shift : shift);
        if (i < 0 || i >= g.nx()) throw Error("perturb: window too small to split");
        out.at(i, g.row(k)) = zeta[k];
      }
      break;
    }
  }
  return out;
}

StabilityReport stability_experiment(const MaximizerResult& zeta, const Perturbation& p, double T, double cfl) {
  StabilityReport r;
  r.perturbation = p;
  const ScalarField omega0 = perturb(zeta.zeta, p);
  r.delta = lp_distance(omega0, zeta.zeta, 2.0);
  r.zeta_norm = lp_norm(zeta.zeta, 2.0);
  EvolveOptions opt;
  opt.T = T;
  opt.cfl = cfl;
  opt.reference = &zeta.zeta;
  r.trajectory = evolve(omega0, opt);
  r.sup_deviation = r.trajectory.max_deviation();
  return r;
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << "t,centroid_x1,centroid_x2,deviation,mass,energy,impulse\n";
  for (const auto& s : traj.samples)
    out << format_double(s.t) << ',' << format_double(s.centroid.x1) << ',' << format_double(s.centroid.x2) << ','
        << format_double(s.deviation) << ',' << format_double(s.mass) << ',' << format_double(s.energy) << ','
        << format_double(s.impulse) << '\n';
}

}  // namespace vp
