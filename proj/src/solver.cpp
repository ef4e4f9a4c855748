#include "vortexpair/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <limits>
#include <numbers>
#include <regex>

#include "vortexpair/field_io.hpp"

namespace vp {

GridSpec parse_grid_spec(const std::string& s) {
  static const std::regex re(R"(\s*([0-9eE.+-]+)\s*[xX]\s*([0-9eE.+-]+)\s*:\s*([0-9]+)\s*)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw Error("bad grid spec '" + s + "' (expected LxH:nx)");
  GridSpec g;
  try {
    g.half_width = std::stod(m[1].str());
    g.height = std::stod(m[2].str());
    g.nx = std::stoi(m[3].str());
  } catch (const std::exception&) {
    throw Error("bad grid spec '" + s + "'");
  }
  return g;
}

void SolverConfig::validate() const {
  if (!(eps > 0.0)) throw SolverError(SolverError::Kind::invalid, "eps must be positive");
  if (!(q > 0.0)) throw SolverError(SolverError::Kind::invalid, "q must be positive");
  if (!(tolerance > 0.0)) throw SolverError(SolverError::Kind::invalid, "tolerance must be positive");
  if (max_iters < 1) throw SolverError(SolverError::Kind::invalid, "max_iters must be >= 1");
  if (!(cells_per_eps > 0.0)) throw SolverError(SolverError::Kind::invalid, "cells_per_eps must be positive");
  if (r0 && !(*r0 > 0.0)) throw SolverError(SolverError::Kind::invalid, "r0 must be positive");
}

Point limit_point(double kappa, double q) { return {0.0, kappa / (4.0 * std::numbers::pi * q)}; }

Grid solver_grid(const SolverConfig& cfg) {
  if (cfg.grid) {
    const GridSpec& s = *cfg.grid;
    if (s.nx <= 0) throw SolverError(SolverError::Kind::invalid, "grid: nx must be positive");
    const double h = 2.0 * s.half_width / s.nx;
    const int ny = static_cast<int>(std::lround(s.height / h));
    return Grid::half_plane(s.half_width, s.height, s.nx, ny);
  }
  const Point xh = limit_point(cfg.profile.kappa(), cfg.q);
  const double a = cfg.profile.radius();
  const double h = cfg.eps / cfg.cells_per_eps;
  const double L = std::max(4.0 * xh.x2, 10.0 * cfg.eps * a);
  const double H = 4.0 * xh.x2;
  const int nx = 2 * static_cast<int>(std::ceil(L / h - 1e-9));
  const int ny = static_cast<int>(std::ceil(H / h - 1e-9));
  return Grid::half_plane_spacing(h, nx, ny);
}

MassProfile class_profile(const ReferenceProfile& rho, double eps, double h, std::size_t n) {
  // Sample rho^eps on a free lattice so that placement (and the wall) cannot
  // clip the class.
  const int m = 2 * static_cast<int>(std::ceil(eps * rho.radius() / h)) + 2;
  const Grid g = Grid::centered(h, m, m);
  if (eps <= 1.0) return resize_profile(profile_of(scale_profile(rho, eps, g)), n);
  // scale_profile is defined for eps <= 1; larger eps only spreads the profile.
  ScalarField f(g, FieldKind::vorticity);
  const double inv = 1.0 / eps;
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = inv * inv * rho(inv * g.center(k));
  f = f.scaled(rho.kappa() / f.integral());
  return resize_profile(profile_of(f), n);
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::fixed_point: return "fixed_point";
    case StopReason::plateau: return "plateau";
    case StopReason::cycle: return "cycle";
  }
  return "fixed_point";
}

namespace {

std::uint64_t field_hash(const ScalarField& f) {
  std::uint64_t h = 1469598103934665603ull;
  for (double v : f.values()) {
    h ^= std::bit_cast<std::uint64_t>(v);
    h *= 1099511628211ull;
  }
  return h;
}

ScalarField mirror_average(const ScalarField& phi) {
  const ScalarField m = phi.mirrored();
  ScalarField out = phi;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = 0.5 * (phi[k] + m[k]);
  return out;
}

double min_core_potential(const ScalarField& zeta, const ScalarField& phi) {
  double mu = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < zeta.size(); ++k)
    if (zeta[k] > 0.0) mu = std::min(mu, phi[k]);
  return mu;
}

std::size_t count_positive(const ScalarField& f) {
  return static_cast<std::size_t>(std::count_if(f.values().begin(), f.values().end(), [](double v) { return v > 0.0; }));
}

}  // namespace

MaximizerResult ascend(const AscentProblem& pb) {
  const Grid& g = pb.grid;
  if (!g.is_half_plane()) throw SolverError(SolverError::Kind::invalid, "solver grid must be a half-plane window");
  if (pb.profile.size() != g.size())
    throw SolverError(SolverError::Kind::invalid, "profile size does not match the solver grid");
  if (!(pb.q > 0.0)) throw SolverError(SolverError::Kind::invalid, "q must be positive");

  const PenalizedObjective obj(pb.q, KernelEvaluator(g, pb.mode));
  const double neg_inf = -std::numeric_limits<double>::infinity();

  std::vector<char> admissible;
  if (pb.ball) {
    admissible.assign(g.size(), 0);
    std::size_t inside = 0;
    for (std::size_t k = 0; k < g.size(); ++k)
      if (distance(g.center(k), pb.ball->center) < pb.ball->radius) {
        admissible[k] = 1;
        ++inside;
      }
    if (inside < pb.profile.positive_count())
      throw SolverError(SolverError::Kind::invalid, "constraint ball holds fewer cells than the support");
  }

  auto make_potential = [&](const ScalarField& psi, bool symmetric) {
    ScalarField phi = obj.potential(psi);
    if (symmetric) phi = mirror_average(phi);
    if (pb.ball)
      for (std::size_t k = 0; k < phi.size(); ++k)
        if (!admissible[k]) phi[k] = neg_inf;
    return phi;
  };

  ScalarField zeta;
  if (pb.initial) {
    zeta = pb.initial->with_kind(FieldKind::vorticity);
    if (!(profile_of(zeta) == pb.profile))
      throw SolverError(SolverError::Kind::invalid, "initial field is not in the rearrangement class");
  } else {
    zeta = symmetric_decreasing(pb.profile, g, pb.init_center);
  }
  if (pb.ball) {
    // Start from the best admissible member.
    ScalarField phi0(g, FieldKind::generic);
    for (std::size_t k = 0; k < g.size(); ++k) phi0[k] = admissible[k] ? -distance(g.center(k), pb.ball->center) : neg_inf;
    zeta = maximize_linear(pb.profile, phi0);
  }

  ScalarField psi = obj.kernel().apply_G(zeta);
  double value = obj.value(zeta, psi);

  MaximizerResult best;
  best.zeta = zeta;
  best.psi = psi;
  best.objective = value;

  std::deque<std::pair<std::uint64_t, ScalarField>> history;
  history.emplace_back(field_hash(zeta), zeta);

  std::vector<IterationRecord> log;
  ScalarField phi = make_potential(psi, pb.symmetric);
  log.push_back({0, value, min_core_potential(zeta, phi), count_positive(zeta)});

  int small_steps = 0;
  bool converged = false;
  StopReason reason = StopReason::fixed_point;
  ScalarField best_phi = phi;
  int it = 0;
  for (it = 1; it <= pb.max_iters; ++it) {
    ScalarField next = maximize_linear(pb.profile, phi);
    if (next == zeta) {
      converged = true;
      reason = StopReason::fixed_point;
      break;
    }
    ScalarField next_psi = obj.kernel().apply_G(next);
    double next_value = obj.value(next, next_psi);
    if (pb.symmetric && next_value < value) {
      // The averaged potential can lose a little when zeta is not exactly
      // even; the raw potential step cannot.
      ScalarField raw = maximize_linear(pb.profile, make_potential(psi, false));
      ScalarField raw_psi = obj.kernel().apply_G(raw);
      const double raw_value = obj.value(raw, raw_psi);
      if (raw_value > next_value) {
        next = std::move(raw);
        next_psi = std::move(raw_psi);
        next_value = raw_value;
      }
      if (next == zeta) {
        converged = true;
        reason = StopReason::fixed_point;
        break;
      }
    }
    if (next_value < value - 1e-9 * std::abs(value))
      throw SolverError(SolverError::Kind::objective_decreased,
                        "objective decreased at iteration " + std::to_string(it) + " (" + format_double(value) +
                            " -> " + format_double(next_value) + ")");

    const std::uint64_t hsh = field_hash(next);
    bool seen = false;
    for (const auto& [hv, f] : history)
      if (hv == hsh && f == next) seen = true;

    if (next_value - value < pb.tolerance * std::abs(value))
      ++small_steps;
    else
      small_steps = 0;

    zeta = std::move(next);
    psi = std::move(next_psi);
    value = next_value;
    phi = make_potential(psi, pb.symmetric);
    log.push_back({it, value, min_core_potential(zeta, phi), count_positive(zeta)});

    if (value > best.objective) {
      best.zeta = zeta;
      best.psi = psi;
      best.objective = value;
      best_phi = phi;
    }
    if (seen) {
      converged = true;
      reason = StopReason::cycle;
      break;
    }
    if (small_steps >= 3) {
      converged = true;
      reason = StopReason::plateau;
      break;
    }
    history.emplace_back(hsh, zeta);
    if (history.size() > 8) history.pop_front();
  }

  if (!converged)
    throw SolverError(SolverError::Kind::not_converged,
                      "not converged after " + std::to_string(pb.max_iters) + " iterations");

  if (reason == StopReason::fixed_point) {
    best.zeta = zeta;
    best.psi = psi;
    best.objective = value;
    best_phi = phi;
  }

  if (pb.check_boundary && touches_window_edge(best.zeta, 2))
    throw SolverError(SolverError::Kind::boundary, "support touches boundary");

  best.q = pb.q;
  best.phi = best_phi;
  best.iterations = std::min(it, pb.max_iters);
  best.converged = true;
  best.reason = reason;
  best.core = support(best.zeta);
  const MultiplierReport m = multiplier(best.zeta, best.psi, pb.q);
  best.mu = m.mu;
  best.multiplier_gap = m.max_violation;
  best.asymmetry = asymmetry(best.zeta);
  best.monotone_violations = monotone_fit(best.zeta, best.phi);
  best.log = std::move(log);
  return best;
}

MaximizerResult ascend(const SolverConfig& cfg) {
  cfg.validate();
  const Grid g = solver_grid(cfg);
  const Point xh = limit_point(cfg.profile.kappa(), cfg.q);

  AscentProblem pb;
  pb.grid = g;
  pb.profile = class_profile(cfg.profile, cfg.eps, g.h(), g.size());
  pb.q = cfg.q;
  pb.init_center = cfg.init_center.value_or(xh);
  pb.symmetric = cfg.symmetric;
  if (cfg.r0) pb.ball = ConstraintBall{cfg.constraint_center.value_or(xh), *cfg.r0};
  pb.max_iters = cfg.max_iters;
  pb.tolerance = cfg.tolerance;
  pb.check_boundary = cfg.check_boundary;
  return ascend(pb);
}

MultiplierReport multiplier(const ScalarField& zeta, const ScalarField& psi, double q) {
  const Grid& g = zeta.grid();
  MultiplierReport r;
  r.mu = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t k = 0; k < zeta.size(); ++k) {
    if (zeta[k] <= 0.0) continue;
    any = true;
    r.mu = std::min(r.mu, psi[k] - q * g.center(k).x2);
  }
  if (!any) throw Error("multiplier: empty core");
  for (std::size_t k = 0; k < zeta.size(); ++k) {
    if (zeta[k] > 0.0) continue;
    r.max_violation = std::max(r.max_violation, psi[k] - q * g.center(k).x2 - r.mu);
  }
  return r;
}

MultiplierReport multiplier(const MaximizerResult& r, double q) { return multiplier(r.zeta, r.psi, q); }

std::size_t monotone_fit(const ScalarField& zeta, const ScalarField& phi) {
  std::vector<std::size_t> order(zeta.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return phi[a] < phi[b]; });
  std::size_t violations = 0;
  double running_max = -std::numeric_limits<double>::infinity();
  std::size_t k = 0;
  while (k < order.size()) {
    std::size_t e = k;
    while (e < order.size() && phi[order[e]] == phi[order[k]]) ++e;
    double group_max = running_max;
    for (std::size_t t = k; t < e; ++t) {
      const double v = zeta[order[t]];
      if (v < running_max) ++violations;
      group_max = std::max(group_max, v);
    }
    running_max = group_max;
    k = e;
  }
  return violations;
}

std::size_t monotone_fit(const MaximizerResult& r) { return monotone_fit(r.zeta, r.phi); }

double core_energy(const MaximizerResult& r, double q) {
  const double mu = multiplier(r, q).mu;
  const Grid& g = r.zeta.grid();
  double s = 0.0;
  for (std::size_t k = 0; k < r.zeta.size(); ++k) {
    if (r.zeta[k] <= 0.0) continue;
    s += r.zeta[k] * (r.psi[k] - q * g.center(k).x2 - mu);
  }
  return g.cell_area() * s;
}

void write_iteration_log(const MaximizerResult& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << "iteration,objective,mu,support_size\n";
  for (const auto& rec : r.log)
    out << rec.iteration << ',' << format_double(rec.objective) << ',' << format_double(rec.mu) << ','
        << rec.support_size << '\n';
}

}  // namespace vp
