#include "vortexpair/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <numbers>

#include "vortexpair/field_io.hpp"

namespace vp {

std::vector<const SweepRow*> SweepReport::clean_rows() const {
  std::vector<const SweepRow*> out;
  for (const auto& r : rows)
    if (r.ok) out.push_back(&r);
  return out;
}

ScalarField rescaled_profile(const ScalarField& zeta, double eps, Point centroid, double kappa) {
  const Grid& g = zeta.grid();
  const double inv = 1.0 / eps;
  const Grid ng = Grid::with_origin(g.h() * inv, g.nx(), g.ny(), inv * (g.lower_left() - centroid));
  ScalarField nu(ng, FieldKind::vorticity);
  for (std::size_t k = 0; k < nu.size(); ++k) nu[k] = eps * eps * zeta[k];
  const double m = nu.integral();
  if (!(m > 0.0)) throw Error("rescaled_profile: zero field");
  return nu.scaled(kappa / m);
}

ScalarField rho_star(const ScalarField& nu) { return symmetric_decreasing(profile_of(nu), nu.grid(), Point{}); }

namespace {

constexpr double kPi = std::numbers::pi;

double stream_log_sup(const KernelEvaluator& K, const ScalarField& zeta, double eps, double kappa) {
  double sup = -std::numeric_limits<double>::infinity();
  for (double x1 : {0.0, 0.5, 1.0})
    for (double x2 : {1.0, 2.0, 4.0, 8.0}) {
      const double psi = K.stream_at(zeta, {x1, x2});
      sup = std::max(sup, (psi + kappa / (2.0 * kPi) * std::log(eps)) / (1.0 + std::log(x2)));
    }
  return sup;
}

double stream_decay_sup(const KernelEvaluator& K, const ScalarField& zeta, double eps, double p) {
  double sup = -std::numeric_limits<double>::infinity();
  const double scale = std::pow(eps, 2.0 - 2.0 / p);
  for (double x1 : {-8.0, -4.0, -2.0, -1.0, 1.0, 2.0, 4.0, 8.0})
    for (double x2 : {0.125, 0.25, 0.5, 1.0}) {
      const double psi = K.stream_at(zeta, {x1, x2});
      sup = std::max(sup, psi * scale * std::pow(std::abs(x1), 1.0 / (2.0 * p)) / x2);
    }
  return sup;
}

}  // namespace

SweepRow row_metrics(const ScalarField& zeta, double eps, double q, double kappa, double p) {
  const Grid& g = zeta.grid();
  const KernelEvaluator K(g);
  const ScalarField psi = K.apply_G(zeta);

  SweepRow r;
  r.eps = eps;
  r.ok = true;
  r.h = g.h();
  r.objective = energy(zeta, psi) - q * impulse(zeta);
  r.diam = diameter(support(zeta));
  r.diam_over_eps = r.diam / eps;
  r.centroid = centroid(zeta);
  r.centroid_offset = distance(r.centroid, limit_point(kappa, q));

  const MultiplierReport m = multiplier(zeta, psi, q);
  r.mu = m.mu;
  r.mu_comp = m.mu + kappa / (2.0 * kPi) * std::log(eps);
  r.objective_comp = r.objective + kappa * kappa / (4.0 * kPi) * std::log(eps);
  double ce = 0.0;
  for (std::size_t k = 0; k < zeta.size(); ++k)
    if (zeta[k] > 0.0) ce += zeta[k] * (psi[k] - q * g.center(k).x2 - m.mu);
  r.core_energy = g.cell_area() * ce;

  const ScalarField nu = rescaled_profile(zeta, eps, r.centroid, kappa);
  const ScalarField rs = rho_star(nu);
  r.nu_dist_2 = lp_distance(nu, rs, 2.0);
  r.nu_dist_p = lp_distance(nu, rs, p);
  r.rho_star_norm_2 = lp_norm(rs, 2.0);
  r.asymmetry = asymmetry(zeta);

  const ScalarField w = unit_scale(zeta, eps, Grid::half_plane_spacing(g.h() / eps, g.nx(), g.ny()));
  r.lambda_x2 = eps * q * centroid(w).x2;

  r.stream_log_sup = stream_log_sup(K, zeta, eps, kappa);
  r.stream_decay_sup = stream_decay_sup(K, zeta, eps, p);
  return r;
}

double diameter_limit(const ReferenceProfile& rho) { return 2.0 * std::sqrt(rho.support_area() / kPi); }

SweepReport run_sweep(const std::vector<double>& eps_list, const SolverConfig& tmpl, double p, bool parallel) {
  if (eps_list.empty()) throw Error("sweep: empty eps list");
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0)) throw Error("sweep: eps must be positive");
    if (k > 0 && !(eps_list[k] < eps_list[k - 1]))
      throw Error(eps_list[k] == eps_list[k - 1] ? "sweep: duplicate eps values"
                                                 : "sweep: eps list must be strictly decreasing");
  }
  if (!(p >= 1.0)) throw Error("sweep: p must be >= 1");

  SweepReport rep;
  rep.profile = tmpl.profile.name();
  rep.kappa = tmpl.profile.kappa();
  rep.q = tmpl.q;
  rep.p = p;
  rep.x_hat = limit_point(rep.kappa, rep.q);
  rep.diam_limit = diameter_limit(tmpl.profile);

  auto solve_row = [&tmpl, p](double eps) {
    SolverConfig cfg = tmpl;
    cfg.eps = eps;
    SweepRow row;
    try {
      MaximizerResult res = ascend(cfg);
      row = row_metrics(res.zeta, eps, cfg.q, cfg.profile.kappa(), p);
      row.iterations = res.iterations;
      row.stop = to_string(res.reason);
      row.result = std::move(res);
    } catch (const Error& e) {
      row = SweepRow{};
      row.eps = eps;
      row.ok = false;
      row.error = e.what();
    }
    return row;
  };

  std::vector<std::future<SweepRow>> jobs;
  for (double eps : eps_list)
    jobs.push_back(std::async(parallel ? std::launch::async : std::launch::deferred, solve_row, eps));
  for (auto& j : jobs) rep.rows.push_back(j.get());
  return rep;
}

const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::pass: return "pass";
    case VerdictStatus::fail: return "fail";
    case VerdictStatus::insufficient: return "insufficient data";
  }
  return "insufficient data";
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double median_abs(std::vector<double> v) {
  for (double& x : v) x = std::abs(x);
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string excluded(const SweepReport& r) {
  std::string s;
  for (const auto& row : r.rows)
    if (!row.ok) s += "; eps=" + fmt(row.eps) + " excluded (" + row.error + ")";
  return s;
}

template <class Body>
Verdict trend_check(const SweepReport& r, const char* name, Body body) {
  Verdict v;
  v.name = name;
  const auto rows = r.clean_rows();
  if (rows.size() < 3) {
    v.status = VerdictStatus::insufficient;
    v.message = std::to_string(rows.size()) + " clean rows" + excluded(r);
    return v;
  }
  std::string msg;
  const bool ok = body(rows, msg);
  v.status = ok ? VerdictStatus::pass : VerdictStatus::fail;
  v.message = msg + excluded(r);
  return v;
}

// Each value at most (1 + slack) times the previous one.
bool nonincreasing(const std::vector<double>& v, double slack) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k] > (1.0 + slack) * v[k - 1] + 1e-12) return false;
  return true;
}

std::string series(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? " " : "") + fmt(v[k]);
  return s;
}

template <class F>
std::vector<double> column(const std::vector<const SweepRow*>& rows, F f) {
  std::vector<double> out;
  for (const SweepRow* r : rows) out.push_back(f(*r));
  return out;
}

}  // namespace

Verdict check_diameter(const SweepReport& r) {
  return trend_check(r, "diameter", [&](const auto& rows, std::string& msg) {
    const auto d = column(rows, [](const SweepRow& x) { return x.diam_over_eps; });
    const double mx = *std::max_element(d.begin(), d.end());
    const double fin = d.back();
    const bool bounded = mx <= 2.0 * d.front();
    const bool limit = fin >= 0.75 * r.diam_limit && fin <= 1.25 * r.diam_limit;
    msg = "diam/eps: " + series(d) + "; limit " + fmt(r.diam_limit);
    if (!bounded) msg += "; max exceeds twice the first row";
    if (!limit) msg += "; final row outside [" + fmt(0.75 * r.diam_limit) + ", " + fmt(1.25 * r.diam_limit) + "]";
    return bounded && limit;
  });
}

Verdict check_centroid(const SweepReport& r) {
  return trend_check(r, "centroid", [&](const auto& rows, std::string& msg) {
    const auto d = column(rows, [](const SweepRow& x) { return x.centroid_offset; });
    const double tol = std::max(0.1 * r.x_hat.x2, 4.0 * rows.back()->h);
    const bool trend = nonincreasing(d, 0.2);
    const bool fin = d.back() <= tol;
    msg = "|centroid - x_hat|: " + series(d) + "; final tolerance " + fmt(tol);
    if (!trend) msg += "; not decreasing";
    if (!fin) msg += "; final row too far";
    return trend && fin;
  });
}

Verdict check_profile(const SweepReport& r) {
  return trend_check(r, "profile", [&](const auto& rows, std::string& msg) {
    const auto d = column(rows, [](const SweepRow& x) { return x.nu_dist_2; });
    const double tol = 0.2 * rows.back()->rho_star_norm_2;
    const bool trend = nonincreasing(d, 0.2);
    const bool fin = d.back() <= tol;
    msg = "||nu - rho*||_2: " + series(d) + "; final tolerance " + fmt(tol);
    if (!trend) msg += "; not decreasing";
    if (!fin) msg += "; final row too far";
    return trend && fin;
  });
}

Verdict check_bounds(const SweepReport& r) {
  return trend_check(r, "bounds", [&](const auto& rows, std::string& msg) {
    bool ok = true;
    auto spread = [&](const char* name, const std::vector<double>& v) {
      const double s = *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end());
      const double med = median_abs(v);
      msg += std::string(msg.empty() ? "" : "; ") + name + ": " + series(v) + " (spread " + fmt(s) + ", median " +
             fmt(med) + ")";
      if (s > 0.5 * med) {
        msg += " spread too large";
        ok = false;
      }
    };
    spread("T + (kappa^2/4pi) ln eps", column(rows, [](const SweepRow& x) { return x.objective_comp; }));
    spread("mu + (kappa/2pi) ln eps", column(rows, [](const SweepRow& x) { return x.mu_comp; }));
    spread("core energy", column(rows, [](const SweepRow& x) { return x.core_energy; }));
    for (const SweepRow* x : rows) {
      if (x->mu < 0.0) {
        msg += "; mu < 0 at eps=" + fmt(x->eps);
        ok = false;
      }
      if (x->core_energy < 0.0) {
        msg += "; negative core energy at eps=" + fmt(x->eps);
        ok = false;
      }
    }
    return ok;
  });
}

Verdict check_corollary(const SweepReport& r) {
  return trend_check(r, "corollary", [&](const auto& rows, std::string& msg) {
    const auto v = column(rows, [](const SweepRow& x) { return x.lambda_x2; });
    const double target = r.kappa / (4.0 * kPi);
    const bool ok = std::abs(v.back() - target) <= 0.1 * target;
    msg = "lambda x2: " + series(v) + "; target " + fmt(target);
    return ok;
  });
}

Verdict stream_upper_check(const SweepReport& r) {
  return trend_check(r, "stream_upper", [&](const auto& rows, std::string& msg) {
    bool ok = true;
    auto no_growth = [&](const char* name, const std::vector<double>& v) {
      const double cap = v.front() + 0.5 * median_abs(v);
      msg += std::string(msg.empty() ? "" : "; ") + name + ": " + series(v) + " (cap " + fmt(cap) + ")";
      for (double x : v)
        if (x > cap) {
          msg += " grows";
          ok = false;
          return;
        }
    };
    no_growth("sup (psi + (kappa/2pi) ln eps)/(1 + ln x2)", column(rows, [](const SweepRow& x) { return x.stream_log_sup; }));
    no_growth("sup psi eps^(2-2/p) |x1|^(1/2p) / x2", column(rows, [](const SweepRow& x) { return x.stream_decay_sup; }));
    return ok;
  });
}

std::vector<Verdict> all_checks(const SweepReport& r) {
  return {check_diameter(r), check_centroid(r), check_profile(r),
          check_bounds(r),   check_corollary(r), stream_upper_check(r)};
}

nlohmann::json to_json(const std::vector<Verdict>& verdicts) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& v : verdicts) j[v.name] = {{"status", to_string(v.status)}, {"message", v.message}};
  return j;
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols = {
      "eps",         "ok",          "error",       "h",           "objective",      "diam",
      "diam_over_eps", "centroid_x1", "centroid_x2", "centroid_offset", "mu",       "mu_comp",
      "objective_comp", "core_energy", "nu_dist_2", "nu_dist_p",   "rho_star_norm_2", "asymmetry",
      "lambda_x2",   "stream_log_sup", "stream_decay_sup", "iterations", "stop"};
  return cols;
}

std::vector<std::string> report_cells(const SweepRow& r) {
  std::string err = r.error;
  std::replace(err.begin(), err.end(), ',', ';');
  if (!r.ok) {
    std::vector<std::string> cells(report_columns().size());
    cells[0] = format_double(r.eps);
    cells[1] = "0";
    cells[2] = err;
    return cells;
  }
  const auto f = format_double;
  return {f(r.eps),           "1",
          err,                f(r.h),
          f(r.objective),     f(r.diam),
          f(r.diam_over_eps), f(r.centroid.x1),
          f(r.centroid.x2),   f(r.centroid_offset),
          f(r.mu),            f(r.mu_comp),
          f(r.objective_comp), f(r.core_energy),
          f(r.nu_dist_2),     f(r.nu_dist_p),
          f(r.rho_star_norm_2), f(r.asymmetry),
          f(r.lambda_x2),     f(r.stream_log_sup),
          f(r.stream_decay_sup), std::to_string(r.iterations),
          r.stop};
}

}  // namespace vp
