#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "vortexpair/solver.hpp"

using namespace vp;

namespace {

AscentProblem small_problem(const Grid& g, std::vector<double> positive, double q) {
  AscentProblem pb;
  pb.grid = g;
  std::sort(positive.begin(), positive.end(), std::greater<>());
  positive.resize(g.size(), 0.0);
  pb.profile = MassProfile{positive, g.cell_area()};
  pb.q = q;
  pb.init_center = g.center(g.nx() / 2, 0);
  pb.symmetric = false;
  pb.check_boundary = false;
  return pb;
}

// Best objective over every arrangement of the multiset.
std::pair<double, ScalarField> brute_max(const AscentProblem& pb) {
  const KernelEvaluator k(pb.grid, KernelMode::direct);
  std::vector<double> perm = pb.profile.values;
  std::sort(perm.begin(), perm.end());
  double best = -1e300;
  ScalarField arg;
  do {
    const ScalarField f(pb.grid, perm, FieldKind::vorticity);
    const double v = objective(f, pb.q, k);
    if (v > best) {
      best = v;
      arg = f;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {best, arg};
}

}  // namespace

TEST_CASE("limit point and default window") {
  const Point x = limit_point(std::numbers::pi, 1.0);
  CHECK(x.x1 == 0.0);
  CHECK(x.x2 == doctest::Approx(0.25));
  SolverConfig cfg;
  cfg.eps = 0.1;
  const Grid g = solver_grid(cfg);
  CHECK(g.h() == doctest::Approx(0.0125));
  CHECK(g.half_width() == doctest::Approx(1.0));
  CHECK(g.height() == doctest::Approx(1.0));
  cfg.grid = parse_grid_spec("2x1.5:64");
  const Grid o = solver_grid(cfg);
  CHECK(o.nx() == 64);
  CHECK(o.h() == doctest::Approx(4.0 / 64));
  CHECK(o.height() == doctest::Approx(1.5));
}

TEST_CASE("parse_grid_spec") {
  const GridSpec s = parse_grid_spec("1.5x0.75:96");
  CHECK(s.half_width == 1.5);
  CHECK(s.height == 0.75);
  CHECK(s.nx == 96);
  CHECK_THROWS_WITH(parse_grid_spec("1.5x0.75"), doctest::Contains("bad grid spec"));
  CHECK_THROWS(parse_grid_spec("ax1:4"));
}

TEST_CASE("single small cell goes to the lowest row") {
  const Grid g = Grid::half_plane_spacing(0.1, 6, 6);
  for (double mass : {0.1, 0.5}) {
    const AscentProblem pb = small_problem(g, {mass / g.cell_area()}, 1.0);
    const MaximizerResult r = ascend(pb);
    const auto [best, arg] = brute_max(pb);
    CHECK(r.objective == doctest::Approx(best).epsilon(1e-12));
    CHECK(r.zeta.grid().row(support(r.zeta).cells.front()) == arg.grid().row(support(arg).cells.front()));
    CHECK(core_energy(r, pb.q) == doctest::Approx(0.0).scale(1.0));
  }
  const MaximizerResult r = ascend(small_problem(g, {0.5 / g.cell_area()}, 1.0));
  CHECK(g.row(support(r.zeta).cells.front()) == 0);
}

TEST_CASE("small classes: global maximum is a fixed point") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(1.0, 40.0);
  const Grid g = Grid::half_plane_spacing(0.1, 4, 2);
  for (int trial = 0; trial < 12; ++trial) {
    AscentProblem pb = small_problem(g, {u(rng), u(rng), u(rng)}, 0.5 + trial * 0.1);
    const auto [best, arg] = brute_max(pb);
    const MaximizerResult r = ascend(pb);
    CHECK(r.objective <= best + 1e-12 * std::abs(best));
    CHECK(profile_of(r.zeta) == pb.profile);

    pb.initial = arg;
    const MaximizerResult s = ascend(pb);
    CHECK(s.objective == doctest::Approx(best).epsilon(1e-12));
    CHECK(monotone_fit(s) == 0);
  }
}

TEST_CASE("ascent on a disk class") {
  SolverConfig cfg;
  cfg.eps = 0.2;
  const MaximizerResult r = ascend(cfg);
  const Grid g = solver_grid(cfg);
  CHECK(profile_of(r.zeta) == class_profile(cfg.profile, cfg.eps, g.h(), g.size()));
  for (std::size_t k = 1; k < r.log.size(); ++k) CHECK(r.log[k].objective >= r.log[k - 1].objective);
  CHECK(r.converged);
  CHECK(r.mu >= 0.0);
  CHECK(r.mu == doctest::Approx(multiplier(r, cfg.q).mu));
  CHECK(r.asymmetry == doctest::Approx(0.0).scale(1.0));
  CHECK(monotone_fit(r) == 0);
  CHECK(core_energy(r, cfg.q) >= 0.0);
  CHECK(r.zeta.integral() == doctest::Approx(std::numbers::pi).epsilon(1e-12));

  ScalarField shuffled = r.zeta;
  std::mt19937_64 rng(1);
  std::shuffle(shuffled.values().begin(), shuffled.values().end(), rng);
  CHECK(monotone_fit(shuffled, r.phi) > 0);

  // A constraint ball that holds the whole window changes nothing.
  SolverConfig big = cfg;
  big.r0 = 10.0;
  const MaximizerResult b = ascend(big);
  CHECK(b.zeta == r.zeta);
}

TEST_CASE("constrained mode keeps the support in the ball") {
  SolverConfig cfg;
  cfg.eps = 0.2;
  cfg.r0 = 0.25;
  const MaximizerResult r = ascend(cfg);
  const Point xh = limit_point(cfg.profile.kappa(), cfg.q);
  for (std::size_t k : r.core.cells) CHECK(distance(r.zeta.grid().center(k), xh) < 0.25);
  cfg.r0 = 0.01;
  CHECK_THROWS_WITH(ascend(cfg), doctest::Contains("fewer cells"));
}

TEST_CASE("solver error kinds") {
  SolverConfig cfg;
  cfg.eps = 0.2;
  cfg.grid = GridSpec{0.3, 0.3, 24};
  try {
    ascend(cfg);
    FAIL("expected a boundary error");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverError::Kind::boundary);
    CHECK(std::string(e.what()) == "support touches boundary");
  }

  SolverConfig slow;
  slow.eps = 0.2;
  slow.max_iters = 1;
  try {
    ascend(slow);
    FAIL("expected not_converged");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverError::Kind::not_converged);
  }

  SolverConfig bad;
  bad.eps = -1.0;
  CHECK_THROWS_AS(ascend(bad), SolverError);
  bad.eps = 0.1;
  bad.q = 0.0;
  CHECK_THROWS_AS(ascend(bad), SolverError);
}

TEST_CASE("centroid near the limit point for small eps") {
  SolverConfig cfg;
  cfg.eps = 0.05;
  const MaximizerResult r = ascend(cfg);
  const Point c = centroid(r.zeta);
  const Point xh = limit_point(cfg.profile.kappa(), cfg.q);
  CHECK(std::abs(c.x1) < 1e-12);
  CHECK(std::abs(c.x2 - xh.x2) <= 0.1 * xh.x2);
}
