#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vortexpair/dynamics.hpp"

using namespace vp;

namespace {

constexpr double pi = std::numbers::pi;

// Ascending series for J_n, independent of the library routine.
double series_j(int n, double z) {
  const double half = 0.5 * z;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= half / k;
  double sum = term;
  for (int m = 1; m < 100; ++m) {
    term *= -half * half / (double(m) * (m + n));
    sum += term;
  }
  return sum;
}

double series_j1_zero() {
  double lo = 3.0, hi = 4.5;
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    (series_j(1, mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<TrajectorySample> stationary_samples(int n) {
  std::vector<TrajectorySample> s;
  for (int k = 0; k < n; ++k) s.push_back({0.1 * k, {0.3, 0.5}});
  return s;
}

const MaximizerResult& maximizer() {
  static const MaximizerResult r = [] {
    SolverConfig cfg;
    cfg.eps = 0.1;
    return ascend(cfg);
  }();
  return r;
}

}  // namespace

TEST_CASE("zero field is unchanged") {
  const Grid g = Grid::half_plane_spacing(0.1, 8, 4);
  const Evolver ev(g);
  const ScalarField zero(g, FieldKind::vorticity);
  EvolutionState s = ev.start(zero, 0.01);
  for (int k = 0; k < 3; ++k) s = ev.step(s);
  CHECK(s.omega == zero);
  CHECK(s.t == doctest::Approx(0.03));
  CHECK(std::isinf(cfl_limit(zero, ev.kernel())));
}

TEST_CASE("concentrated blob travels at kappa / (4 pi d)") {
  const double eps = 0.05, d = 0.5;
  const Grid g = Grid::half_plane_spacing(eps / 8, 320, 160);
  const ScalarField blob = scale_profile(ReferenceProfile::disk(1.0), eps, g, {0.0, d});
  const Evolver ev(g);
  EvolutionState s = ev.start(blob);
  std::vector<TrajectorySample> samples{{0.0, centroid(s.omega)}};
  for (int k = 0; k < 20; ++k) {
    s = ev.step(s);
    samples.push_back({s.t, centroid(s.omega)});
  }
  CHECK(measure_speed(samples) == doctest::Approx(pi / (4 * pi * d)).epsilon(0.05));
}

// Reflection in x1 reverses the direction of travel, so an even field does
// not stay even; the exact discrete symmetry is whole-cell translation.
TEST_CASE("evolution commutes with whole-cell x1 shifts") {
  const Grid g = Grid::half_plane_spacing(0.0125, 160, 80);
  const ScalarField f = scale_profile(ReferenceProfile::cone(1.0), 0.1, g, {-0.3, 0.3});
  ScalarField shifted(g, FieldKind::vorticity);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i + 7 < g.nx(); ++i) shifted.at(i + 7, j) = f.at(i, j);
  const Evolver ev(g);
  const double dt = 0.9 * cfl_limit(f, ev.kernel());
  EvolutionState a = ev.start(f, dt), b = ev.start(shifted, dt);
  const double kappa = f.integral();
  for (int k = 0; k < 10; ++k) {
    a = ev.step(a);
    b = ev.step(b);
    double diff = 0.0;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i + 7 < g.nx(); ++i) diff += std::abs(b.omega.at(i + 7, j) - a.omega.at(i, j));
    CHECK(diff * g.cell_area() / kappa <= 1e-10);
  }
  const ScalarField m = a.omega.mirrored();
  double odd = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) odd += std::abs(a.omega[i] - m[i]);
  CHECK(odd * g.cell_area() / kappa > 0.01);
}

TEST_CASE("CFL and boundary errors") {
  const Grid g = Grid::half_plane_spacing(0.0125, 80, 40);
  const ScalarField f = scale_profile(ReferenceProfile::disk(1.0), 0.1, g, {0.0, 0.25});
  const Evolver ev(g);
  EvolutionState s = ev.start(f);
  s.dt = 2.0 * cfl_limit(f, ev.kernel());
  CHECK_THROWS_WITH_AS(ev.step(s), doctest::Contains("CFL violation"), DynamicsError);

  ScalarField edge(g, FieldKind::vorticity);
  edge.at(1, 5) = 1.0;
  EvolutionState e = ev.start(edge);
  CHECK_THROWS_WITH_AS(ev.step(e), "support touches boundary", DynamicsError);
}

TEST_CASE("measure_speed") {
  CHECK(measure_speed(stationary_samples(6)) == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(measure_speed(stationary_samples(4)), DynamicsError);
  auto same_t = stationary_samples(6);
  for (auto& s : same_t) s.t = 1.0;
  CHECK_THROWS_WITH(measure_speed(same_t), doctest::Contains("degenerate"));
}

TEST_CASE("point vortex pair") {
  const auto a = point_vortex_pair(4 * pi, 1.0, 2.0, 0.01);
  CHECK(std::abs(point_vortex_speed(a) - 1.0) <= 1e-6);
  for (const auto& p : a) CHECK(p.x.x2 == 1.0);
  CHECK(a.back().x.x1 == doctest::Approx(2.0).epsilon(1e-12));
  const auto b = point_vortex_pair(2 * pi, 0.5, 1.0, 0.01);
  CHECK(std::abs(point_vortex_speed(b) - 1.0) <= 1e-6);
  const auto c = point_vortex_pair(4 * pi, 1.0, 0.0, 0.01);
  REQUIRE(c.size() == 1);
  CHECK(c[0].x == Point{0.0, 1.0});
  CHECK_THROWS(point_vortex_pair(1.0, 0.0, 1.0, 0.1));
}

TEST_CASE("Lamb dipole") {
  CHECK(lamb_ka == doctest::Approx(series_j1_zero()).epsilon(1e-12));
  CHECK(std::abs(lamb_ka - 3.8317059702) <= 1e-8);
  CHECK(std::abs(std::cyl_bessel_j(1.0, lamb_ka)) < 1e-14);
  for (double z : {0.0, 0.5, 2.0, 3.8, 7.0}) {
    CHECK(std::cyl_bessel_j(0.0, z) == doctest::Approx(series_j(0, z)).epsilon(1e-12).scale(1.0));
    CHECK(std::cyl_bessel_j(1.0, z) == doctest::Approx(series_j(1, z)).epsilon(1e-12).scale(1.0));
  }

  const double a = 1.0, W = 1.0;
  const Grid g = Grid::half_plane(4.0, 2.0, 256, 64);
  const ScalarField lamb = lamb_dipole(a, W, g, -1.5);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (distance(g.center(k), {-1.5, 0.0}) >= a) CHECK(lamb[k] == 0.0);
    CHECK(lamb[k] >= 0.0);
  }
  CHECK(lamb.max() > 0.0);
  CHECK_THROWS_WITH(lamb_dipole(a, W, g, 3.5), doctest::Contains("grid too small"));

  EvolveOptions opt;
  opt.T = 1.0;
  const Trajectory tr = evolve(lamb, opt);
  CHECK(measure_speed(tr.samples) == doctest::Approx(W).epsilon(0.1));
}

TEST_CASE("maximizer travels at speed q") {
  const MaximizerResult& r = maximizer();
  EvolveOptions opt;
  opt.T = 0.05;
  const Trajectory tr = evolve(r.zeta, opt);
  CHECK(measure_speed(tr.samples) == doctest::Approx(1.0).epsilon(0.1));
  const double x2 = tr.samples.front().centroid.x2;
  for (const auto& s : tr.samples) CHECK(std::abs(s.centroid.x2 - x2) <= 0.02 * x2);
}

TEST_CASE("conservation over the evolution horizon") {
  const MaximizerResult& r = maximizer();
  EvolveOptions opt;
  opt.T = 0.05;
  const Trajectory tr = evolve(r.zeta, opt);
  for (const auto& s : tr.samples) CHECK(std::isfinite(s.energy));
  CHECK(tr.max_mass_drift() <= 0.01);
  CHECK(tr.max_impulse_drift() <= 0.02);
}

TEST_CASE("perturbations") {
  const MaximizerResult& r = maximizer();
  const ScalarField& z = r.zeta;
  const double norm = lp_norm(z, 2.0);

  const ScalarField t = perturb(z, {PerturbationKind::tilt, 0.01});
  CHECK(lp_distance(t, z, 2.0) == doctest::Approx(0.01 * norm).epsilon(1e-10));
  CHECK(t.integral() == doctest::Approx(z.integral()).epsilon(1e-3));
  CHECK(support(t).cells == support(z).cells);

  const ScalarField sp = perturb(z, {PerturbationKind::split, 0.01});
  CHECK(profile_of(sp) == profile_of(z));
  CHECK(lp_distance(sp, z, 2.0) == doctest::Approx(std::sqrt(2.0) * norm).epsilon(1e-12));

  CHECK(perturb(z, {PerturbationKind::none, 0.01}) == z);
  CHECK(perturbation_from_string("split") == PerturbationKind::split);
  CHECK(std::string(to_string(PerturbationKind::tilt)) == "tilt");
  CHECK_THROWS(perturbation_from_string("shake"));
}

TEST_CASE("translate_distance") {
  const Grid g = Grid::half_plane_spacing(0.1, 20, 6);
  ScalarField a(g, FieldKind::vorticity), b(g, FieldKind::vorticity);
  a.at(5, 2) = 1.0;
  a.at(6, 3) = 2.0;
  b.at(12, 2) = 1.0;
  b.at(13, 3) = 2.0;
  CHECK(translate_distance(a, b) == doctest::Approx(0.0).scale(1.0));
  CHECK(translate_distance(a, ScalarField(g, FieldKind::vorticity)) == doctest::Approx(lp_norm(a, 2.0)));
}
