#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "vortexpair/rearrange.hpp"

using namespace vp;

namespace {

ScalarField field(const Grid& g, std::vector<double> v) { return ScalarField(g, std::move(v), FieldKind::vorticity); }

ScalarField random_field(const Grid& g, std::mt19937_64& rng, double density = 1.0, bool ties = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> level(1, 3);
  ScalarField f(g, FieldKind::vorticity);
  for (std::size_t k = 0; k < f.size(); ++k)
    if (u(rng) < density) f[k] = ties ? level(rng) : u(rng);
  return f;
}

double pairing(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Half-cell construction of one Steiner row.
std::vector<double> steiner_row_oracle(std::vector<double> row) {
  const std::size_t n = row.size();
  std::vector<double> halves;
  for (double v : row) halves.insert(halves.end(), {v, v});
  std::sort(halves.begin(), halves.end(), std::greater<>());
  // Distance rank of half-cells outward from the axis, alternating sides.
  std::vector<double> left(n), right(n);
  for (std::size_t r = 0; r < 2 * n; ++r) (r % 2 == 0 ? right : left)[r / 2] = halves[r];
  std::vector<double> out(n);
  for (std::size_t m = 0; m < n / 2; ++m) {
    out[n / 2 + m] = 0.5 * (right[2 * m] + right[2 * m + 1]);
    out[n / 2 - 1 - m] = 0.5 * (left[2 * m] + left[2 * m + 1]);
  }
  return out;
}

}  // namespace

TEST_CASE("profile_of") {
  const Grid g = Grid::centered(1.0, 3, 1);
  const MassProfile p = profile_of(field(g, {0, 3, 1}));
  CHECK(p.values == std::vector<double>{3, 1, 0});
  CHECK(p.mass() == 4.0);
  CHECK(p.positive_count() == 2);
  CHECK_THROWS(profile_of(ScalarField(g, {0, -1, 1}, FieldKind::generic)));
  CHECK(resize_profile(p, 5).values == std::vector<double>{3, 1, 0, 0, 0});
  CHECK_THROWS(resize_profile(p, 1));
}

TEST_CASE("maximize_linear small example") {
  const Grid g = Grid::centered(1.0, 3, 1);
  const ScalarField phi(g, {0.1, 0.9, 0.5}, FieldKind::generic);
  const MassProfile p{{3, 2, 1}, 1.0};
  const ScalarField v = maximize_linear(p, phi);
  CHECK(std::vector<double>(v.values().begin(), v.values().end()) == std::vector<double>{1, 3, 2});
  CHECK_THROWS(maximize_linear(MassProfile{{1, 0}, 1.0}, phi));
}

TEST_CASE("maximize_linear is the exhaustive maximum") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const Grid g = Grid::half_plane_spacing(0.1, 2, 3);
    ScalarField phi(g, FieldKind::generic);
    for (std::size_t k = 0; k < phi.size(); ++k) phi[k] = u(rng);
    const MassProfile p = profile_of(random_field(g, rng, 0.7, trial % 2 == 0));
    const ScalarField best = maximize_linear(p, phi);

    std::vector<double> perm = p.values;
    std::sort(perm.begin(), perm.end());
    double brute = -1e300;
    do {
      brute = std::max(brute, pairing(field(g, perm), phi));
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(pairing(best, phi) == doctest::Approx(brute).epsilon(1e-14));
    CHECK(profile_of(best) == p);
    for (std::size_t a = 0; a < g.size(); ++a)
      for (std::size_t b = 0; b < g.size(); ++b)
        if (phi[a] > phi[b]) CHECK(best[a] >= best[b]);
  }
}

TEST_CASE("linear_order groups mirror pairs on ties") {
  const Grid g = Grid::half_plane_spacing(0.1, 4, 2);
  ScalarField phi(g, FieldKind::generic);
  for (std::size_t k = 0; k < phi.size(); ++k) phi[k] = -std::abs(g.center(k).x1) - g.center(k).x2;
  const auto order = linear_order(phi);
  CHECK(order.size() == g.size());
  CHECK(g.mirror_index(order[0]) == order[1]);
  CHECK(g.center(order[0]).x1 > 0.0);

  ScalarField even = maximize_linear(MassProfile{{5, 4, 3, 2, 1, 0, 0, 0}, 0.01}, phi);
  // Equal phi on mirror pairs: the larger value sits at x1 >= 0.
  CHECK(even[order[0]] >= even[order[1]]);
}

TEST_CASE("symmetric_decreasing") {
  const double h = 0.05;
  const Grid g = Grid::centered(h, 60, 60);
  const double r = 1.0;
  const std::size_t n = static_cast<std::size_t>(std::lround(std::numbers::pi * r * r / (h * h)));
  MassProfile p{std::vector<double>(n, 1.0), h * h};
  const ScalarField s = symmetric_decreasing(p, g);
  std::size_t diff = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const bool in = distance(g.center(k), {}) < r;
    if (in != (s[k] > 0.0)) ++diff;
  }
  CHECK(diff * h * h <= 2 * std::numbers::pi * r * 2 * h);

  std::mt19937_64 rng(3);
  const Grid small = Grid::centered(0.1, 12, 10);
  for (int trial = 0; trial < 20; ++trial) {
    const ScalarField f = random_field(small, rng, 0.4);
    const ScalarField fs = symmetric_decreasing(profile_of(f), small);
    CHECK(profile_of(fs) == profile_of(f));
    for (double q : {1.0, 2.0, 5.0}) CHECK(lp_norm(fs, q) == doctest::Approx(lp_norm(f, q)).epsilon(1e-13));
    for (std::size_t a = 0; a < small.size(); ++a)
      for (std::size_t b = 0; b < small.size(); ++b)
        if (distance(small.center(a), {}) < distance(small.center(b), {}) - 1e-12) CHECK(fs[a] >= fs[b]);
  }
  CHECK_THROWS_WITH(symmetric_decreasing(MassProfile{std::vector<double>(200, 1.0), 0.01}, small),
                    doctest::Contains("grid too small"));
}

TEST_CASE("steiner_symmetrize") {
  const Grid g = Grid::half_plane_spacing(0.1, 4, 1);
  const ScalarField f = field(g, {0, 3, 1, 2});
  const ScalarField s = steiner_symmetrize(f);
  CHECK(std::vector<double>(s.values().begin(), s.values().end()) == std::vector<double>{0.5, 2.5, 2.5, 0.5});

  std::mt19937_64 rng(5);
  const Grid big = Grid::half_plane_spacing(0.1, 10, 6);
  for (int trial = 0; trial < 20; ++trial) {
    const ScalarField r = random_field(big, rng, 0.6);
    const ScalarField rs = steiner_symmetrize(r);
    double mass = 0.0;
    for (int j = 0; j < big.ny(); ++j) {
      std::vector<double> row, got;
      double a = 0.0, b = 0.0;
      for (int i = 0; i < big.nx(); ++i) {
        row.push_back(r.at(i, j));
        got.push_back(rs.at(i, j));
        a += r.at(i, j);
        b += rs.at(i, j);
      }
      const auto want = steiner_row_oracle(row);
      for (int i = 0; i < big.nx(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-15));
      CHECK(b == doctest::Approx(a).epsilon(1e-14));
      mass += b;
    }
    if (mass > 0.0) CHECK(std::abs(centroid(rs).x1) < 1e-13);
    CHECK(steiner_symmetrize(rs) == rs);
  }
  CHECK_THROWS(steiner_symmetrize(ScalarField(Grid::centered(0.1, 3, 2), FieldKind::vorticity)));
}

TEST_CASE("Hardy-Littlewood and Riesz") {
  std::mt19937_64 rng(23);
  const Grid g = Grid::centered(0.1, 9, 9);
  for (int trial = 0; trial < 50; ++trial) {
    const ScalarField u = random_field(g, rng, 0.5, trial % 3 == 0);
    const ScalarField v = random_field(g, rng, 0.5);
    CHECK(hardy_littlewood_check(u, v));
    CHECK(hardy_littlewood_check(u, u));
    CHECK(riesz_check(u, truncated_log_kernel, v));
  }
  // Equality for already symmetric-decreasing inputs.
  const ScalarField u = random_field(g, rng);
  const ScalarField us = symmetric_decreasing(profile_of(u), g);
  CHECK(riesz_sum(us, truncated_log_kernel, us) > 0.0);
  CHECK(riesz_check(us, truncated_log_kernel, us));
  CHECK(truncated_log_kernel(0, 0, 0.1) == doctest::Approx(0.5 - std::log(0.1 / std::sqrt(std::numbers::pi))));
  CHECK(truncated_log_kernel(20, 0, 0.1) == 0.0);
  CHECK(truncated_log_kernel(3, 4, 0.1) == doctest::Approx(-std::log(0.5)));
}
