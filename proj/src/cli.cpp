#include "vortexpair/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "vortexpair/dynamics.hpp"
#include "vortexpair/field_io.hpp"

namespace vp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kCommands[] = {"solve", "sweep", "evolve", "stability", "reference", "verify"};

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory " + dir.string());
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream t(probe);
    if (!t) throw Error("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

json point_json(Point p) { return json::array({p.x1, p.x2}); }

json result_json(const MaximizerResult& r, double eps, const ReferenceProfile& rho) {
  const Grid& g = r.zeta.grid();
  return {{"eps", eps},
          {"q", r.q},
          {"profile", rho.name()},
          {"kappa", rho.kappa()},
          {"T_eps", r.objective},
          {"mu", r.mu},
          {"multiplier_gap", r.multiplier_gap},
          {"core_energy", core_energy(r, r.q)},
          {"centroid", point_json(centroid(r.zeta))},
          {"x_hat", point_json(limit_point(rho.kappa(), r.q))},
          {"diam", diameter(r.core)},
          {"diam_over_eps", diameter(r.core) / eps},
          {"support_size", r.core.size()},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"stop", to_string(r.reason)},
          {"asymmetry", r.asymmetry},
          {"monotone_violations", r.monotone_violations},
          {"grid", {{"nx", g.nx()}, {"ny", g.ny()}, {"h", g.h()}, {"L", g.half_width()}, {"H", g.height()}}}};
}

json dump_metadata(double eps, double q, double kappa, double p, const std::string& profile) {
  return {{"eps", eps}, {"q", q}, {"kappa", kappa}, {"p", p}, {"profile", profile}};
}

std::string csv_join(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t k = 0; k < cells.size(); ++k) s += (k ? "," : "") + cells[k];
  return s;
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

json verdict_entry(const std::string& status, const std::string& message) {
  return {{"status", status}, {"message", message}};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
  const double eps = cfg.eps.front();
  const SolverConfig sc = solver_config(cfg, eps);
  const MaximizerResult r = ascend(sc);
  ensure_dir(cfg.out / "fields");
  write_json(result_json(r, eps, sc.profile), cfg.out / "result.json");
  write_field_dump(r.zeta, cfg.out / "fields" / eps_stem(eps),
                   dump_metadata(eps, sc.q, sc.profile.kappa(), cfg.p, sc.profile.name()));
  write_iteration_log(r, cfg.out / "log.csv");
  log << "solve eps=" << fmt(eps) << " T=" << fmt(r.objective) << " mu=" << fmt(r.mu) << " iterations=" << r.iterations
      << " (" << to_string(r.reason) << ")\n";
  return exit_ok;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
  const SolverConfig tmpl = solver_config(cfg, cfg.eps.front());
  const SweepReport rep = run_sweep(cfg.eps, tmpl, cfg.p, true);
  const auto verdicts = all_checks(rep);
  emit_report(rep, verdicts, cfg.out);
  bool row_failed = false, check_failed = false;
  for (const auto& row : rep.rows) {
    if (row.ok)
      log << "eps=" << fmt(row.eps) << " T=" << fmt(row.objective) << " mu=" << fmt(row.mu)
          << " diam/eps=" << fmt(row.diam_over_eps) << '\n';
    else
      log << "eps=" << fmt(row.eps) << " failed: " << row.error << " (eps too large or window too small)\n";
    row_failed = row_failed || !row.ok;
  }
  for (const auto& v : verdicts) {
    log << v.name << ": " << to_string(v.status) << '\n';
    check_failed = check_failed || v.status == VerdictStatus::fail;
  }
  if (row_failed) return exit_error;
  return check_failed ? exit_check_failed : exit_ok;
}

double horizon(const RunConfig& cfg, double eps) { return cfg.T > 0.0 ? cfg.T : 0.5 * eps; }

int cmd_evolve(const RunConfig& cfg, std::ostream& log) {
  const double eps = cfg.eps.front();
  const SolverConfig sc = solver_config(cfg, eps);
  const MaximizerResult r = ascend(sc);
  ensure_dir(cfg.out);

  EvolveOptions opt;
  opt.T = horizon(cfg, eps);
  opt.cfl = cfg.cfl;
  opt.reference = &r.zeta;
  const Trajectory tr = evolve(r.zeta, opt);
  write_trajectory_csv(tr, cfg.out / "trajectory.csv");

  if (cfg.snapshot_every > 0) {
    // Replays the run to dump snapshots without holding every state.
    ensure_dir(cfg.out / "snapshots");
    const Evolver ev(r.zeta.grid());
    EvolutionState s = ev.start(r.zeta, 0.0, cfg.cfl);
    const long n = static_cast<long>(std::ceil(opt.T / s.dt - 1e-9));
    if (n > 0) s.dt = opt.T / n;
    for (long k = 0; k <= n; ++k) {
      if (k % cfg.snapshot_every == 0 || k == n) {
        char name[32];
        std::snprintf(name, sizeof name, "step_%06ld", k);
        write_field_dump(s.omega, cfg.out / "snapshots" / name, {{"t", s.t}});
      }
      if (k < n) s = ev.step(s);
    }
  }

  const double speed = measure_speed(tr.samples);
  const double x2_0 = tr.samples.front().centroid.x2;
  double x2_drift = 0.0;
  for (const auto& s : tr.samples) x2_drift = std::max(x2_drift, std::abs(s.centroid.x2 - x2_0) / x2_0);

  json checks;
  auto add = [&](const char* name, bool ok, const std::string& msg) { checks[name] = verdict_entry(ok ? "pass" : "fail", msg); };
  add("speed", std::abs(speed - sc.q) <= 0.1 * sc.q, "speed " + fmt(speed) + " vs q " + fmt(sc.q));
  add("centroid_height", x2_drift <= 0.02, "max relative x2 drift " + fmt(x2_drift));
  add("mass_drift", tr.max_mass_drift() <= 0.01, "max relative mass drift " + fmt(tr.max_mass_drift()));
  add("impulse_drift", tr.max_impulse_drift() <= 0.02, "max relative impulse drift " + fmt(tr.max_impulse_drift()));

  json out = {{"eps", eps},
              {"q", sc.q},
              {"T", opt.T},
              {"dt", tr.final_state.dt},
              {"steps", static_cast<long>(std::lround(opt.T / tr.final_state.dt))},
              {"speed", speed},
              {"mass_drift", tr.max_mass_drift()},
              {"energy_drift", tr.max_energy_drift()},
              {"impulse_drift", tr.max_impulse_drift()},
              {"centroid_x2_drift", x2_drift},
              {"checks", checks}};
  write_json(out, cfg.out / "evolve.json");
  log << "evolve eps=" << fmt(eps) << " speed=" << fmt(speed) << " mass drift=" << fmt(tr.max_mass_drift())
      << " impulse drift=" << fmt(tr.max_impulse_drift()) << '\n';
  for (const auto& [k, v] : checks.items())
    if (v["status"] != "pass") return exit_check_failed;
  return exit_ok;
}

int cmd_stability(const RunConfig& cfg, std::ostream& log) {
  const double eps = cfg.eps.front();
  const SolverConfig sc = solver_config(cfg, eps);
  const MaximizerResult r = ascend(sc);
  ensure_dir(cfg.out);
  const double T = horizon(cfg, eps);

  const Perturbation kind{perturbation_from_string(cfg.perturbation), cfg.delta};
  const StabilityReport control = stability_experiment(r, {PerturbationKind::none, 0.0}, T, cfg.cfl);
  const StabilityReport perturbed = stability_experiment(r, kind, T, cfg.cfl);
  const StabilityReport destructive = stability_experiment(r, {PerturbationKind::split, 0.0}, T, cfg.cfl);
  write_trajectory_csv(control.trajectory, cfg.out / "stability_control.csv");
  write_trajectory_csv(perturbed.trajectory, cfg.out / ("stability_" + cfg.perturbation + ".csv"));
  write_trajectory_csv(destructive.trajectory, cfg.out / "stability_split.csv");

  const double floor = control.sup_deviation;
  const double delta = perturbed.delta;
  const bool small_ok = perturbed.sup_deviation <= 3.0 * delta + floor;
  const bool large_ok = destructive.sup_deviation > 10.0 * delta;
  json out = {{"eps", eps},
              {"T", T},
              {"zeta_norm", control.zeta_norm},
              {"floor", floor},
              {"delta", delta},
              {"perturbation", cfg.perturbation},
              {"perturbed_sup_deviation", perturbed.sup_deviation},
              {"destructive_sup_deviation", destructive.sup_deviation},
              {"mass_drift", perturbed.trajectory.max_mass_drift()},
              {"energy_drift", perturbed.trajectory.max_energy_drift()},
              {"impulse_drift", perturbed.trajectory.max_impulse_drift()},
              {"checks",
               {{"perturbed", verdict_entry(small_ok ? "pass" : "warn",
                                            "sup deviation " + fmt(perturbed.sup_deviation) + " vs 3 delta + floor " +
                                                fmt(3.0 * delta + floor))},
                {"destructive", verdict_entry(large_ok ? "pass" : "warn",
                                              "sup deviation " + fmt(destructive.sup_deviation) + " vs 10 delta " +
                                                  fmt(10.0 * delta))}}}};
  write_json(out, cfg.out / "stability.json");
  log << "stability floor=" << fmt(floor) << " delta=" << fmt(delta) << " perturbed=" << fmt(perturbed.sup_deviation)
      << " destructive=" << fmt(destructive.sup_deviation) << (small_ok && large_ok ? "" : " (warn)") << '\n';
  return exit_ok;
}

int cmd_reference(const RunConfig& cfg, std::ostream& log) {
  ensure_dir(cfg.out);
  const double d = cfg.vortex_height;
  const double T = cfg.T > 0.0 ? cfg.T : 1.0;
  const auto pv = point_vortex_pair(cfg.vortex_kappa, d, T, T / 100.0);
  const double pv_speed = point_vortex_speed(pv);
  const double pv_exact = cfg.vortex_kappa / (4.0 * std::numbers::pi * d);
  {
    std::ofstream out(cfg.out / "point_vortex.csv", std::ios::trunc);
    if (!out) throw Error("cannot write point_vortex.csv");
    out << "t,x1,x2\n";
    for (const auto& s : pv) out << format_double(s.t) << ',' << format_double(s.x.x1) << ',' << format_double(s.x.x2) << '\n';
  }

  const double a = cfg.lamb_radius, W = cfg.lamb_speed;
  const double h = a / 32.0;
  const double L = 4.0 * a, H = 2.0 * a;
  const Grid g = Grid::half_plane(L, H, static_cast<int>(std::lround(2.0 * L / h)), static_cast<int>(std::lround(H / h)));
  const ScalarField lamb = lamb_dipole(a, W, g, -1.5 * a);
  EvolveOptions opt;
  opt.T = a / W;
  opt.cfl = cfg.cfl;
  const Trajectory tr = evolve(lamb, opt);
  write_trajectory_csv(tr, cfg.out / "lamb_dipole.csv");
  const double lamb_speed = measure_speed(tr.samples);

  const bool pv_ok = std::abs(pv_speed - pv_exact) <= 1e-6;
  const bool lamb_ok = std::abs(lamb_speed - W) <= 0.1 * W;
  json out = {{"ka", lamb_ka},
              {"point_vortex", {{"kappa", cfg.vortex_kappa}, {"d", d}, {"speed", pv_speed}, {"exact", pv_exact}}},
              {"lamb_dipole",
               {{"a", a}, {"W", W}, {"h", h}, {"T", opt.T}, {"speed", lamb_speed}, {"mass_drift", tr.max_mass_drift()}}},
              {"checks",
               {{"point_vortex", verdict_entry(pv_ok ? "pass" : "fail", "speed " + format_double(pv_speed))},
                {"lamb_dipole", verdict_entry(lamb_ok ? "pass" : "fail", "speed " + fmt(lamb_speed))}}}};
  write_json(out, cfg.out / "reference.json");
  log << "point vortex speed=" << format_double(pv_speed) << " lamb speed=" << fmt(lamb_speed) << '\n';
  return pv_ok && lamb_ok ? exit_ok : exit_check_failed;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  const VerifyResult v = verify_report(cfg.out);
  for (const auto& m : v.messages) log << m << '\n';
  log << "verify: " << v.rows << " rows, " << v.mismatches << " mismatches, max relative error "
      << fmt(v.max_relative_error) << '\n';
  return v.mismatches == 0 ? exit_ok : exit_check_failed;
}

}  // namespace

void RunConfig::validate() const {
  if (std::find(std::begin(kCommands), std::end(kCommands), command) == std::end(kCommands))
    throw Error("unknown command '" + command + "'");
  if (command == "verify") return;
  if (eps.empty()) throw Error("eps must be given");
  for (double e : eps)
    if (!(e > 0.0)) throw Error("eps must be positive");
  if (command != "sweep" && eps.size() != 1) throw Error(command + " takes a single eps");
  if (!(q > 0.0)) throw Error("q must be positive");
  if (!(p >= 1.0)) throw Error("p must be >= 1");
  if (!(cfl > 0.0) || cfl > 1.0) throw Error("cfl must lie in (0, 1]");
  if (T < 0.0) throw Error("T must be nonnegative");
  if (snapshot_every < 0) throw Error("snapshot stride must be nonnegative");
  if (!(delta >= 0.0)) throw Error("delta must be nonnegative");
}

SolverConfig solver_config(const RunConfig& cfg, double eps) {
  SolverConfig sc;
  sc.eps = eps;
  sc.q = cfg.q;
  sc.profile = ReferenceProfile::parse(cfg.profile);
  if (cfg.grid) sc.grid = parse_grid_spec(*cfg.grid);
  sc.max_iters = cfg.max_iters;
  sc.tolerance = cfg.tolerance;
  sc.cells_per_eps = cfg.cells_per_eps;
  sc.r0 = cfg.r0;
  sc.validate();
  return sc;
}

std::string eps_stem(double eps) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, eps);
  return "eps_" + std::string(buf, res.ptr);
}

void emit_report(const SweepReport& report, const std::vector<Verdict>& verdicts, const fs::path& dir) {
  ensure_dir(dir);
  ensure_dir(dir / "fields");
  {
    std::ofstream out(dir / "report.csv", std::ios::trunc);
    if (!out) throw Error("cannot write report.csv");
    out << csv_join(report_columns()) << '\n';
    for (const auto& row : report.rows) out << csv_join(report_cells(row)) << '\n';
  }
  {
    std::ofstream out(dir / "log.csv", std::ios::trunc);
    if (!out) throw Error("cannot write log.csv");
    out << "eps,iteration,objective,mu,support_size\n";
    for (const auto& row : report.rows) {
      if (!row.result) continue;
      for (const auto& rec : row.result->log)
        out << format_double(row.eps) << ',' << rec.iteration << ',' << format_double(rec.objective) << ','
            << format_double(rec.mu) << ',' << rec.support_size << '\n';
    }
  }
  for (const auto& row : report.rows)
    if (row.result)
      write_field_dump(row.result->zeta, dir / "fields" / eps_stem(row.eps),
                       dump_metadata(row.eps, report.q, report.kappa, report.p, report.profile));
  json v = to_json(verdicts);
  json meta = {{"profile", report.profile}, {"kappa", report.kappa}, {"q", report.q}, {"p", report.p},
               {"x_hat", point_json(report.x_hat)}, {"diam_limit", report.diam_limit}};
  write_json({{"sweep", meta}, {"verdicts", v}}, dir / "verdicts.json");
}

VerifyResult verify_report(const fs::path& dir, double tolerance) {
  std::ifstream in(dir / "report.csv");
  if (!in) throw Error("cannot read " + (dir / "report.csv").string());
  std::string line;
  if (!std::getline(in, line)) throw Error("empty report.csv");
  const auto header = csv_split(line);
  if (header != report_columns()) throw Error("report.csv: unexpected columns");

  VerifyResult res;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = csv_split(line);
    if (cells.size() != header.size()) throw Error("report.csv: ragged row");
    if (cells[1] != "1") continue;
    ++res.rows;
    const double eps = std::stod(cells[0]);
    const FieldDump dump = read_field_dump(dir / "fields" / eps_stem(eps));
    const json& h = dump.header;
    SweepRow row = row_metrics(dump.field, h.at("eps").get<double>(), h.at("q").get<double>(),
                               h.at("kappa").get<double>(), h.at("p").get<double>());
    row.iterations = std::stoi(cells[header.size() - 2]);
    row.stop = cells.back();
    const auto again = report_cells(row);
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == "ok" || header[c] == "error" || header[c] == "iterations" || header[c] == "stop") continue;
      const double a = std::stod(cells[c]), b = std::stod(again[c]);
      const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
      const double rel = a == b ? 0.0 : std::abs(a - b) / scale;
      res.max_relative_error = std::max(res.max_relative_error, rel);
      if (rel > tolerance) {
        ++res.mismatches;
        res.messages.push_back("eps=" + cells[0] + " " + header[c] + ": report " + cells[c] + ", recomputed " + again[c]);
      }
    }
  }
  return res;
}

int run(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    cfg.validate();
    if (cfg.command == "solve") return cmd_solve(cfg, log);
    if (cfg.command == "sweep") return cmd_sweep(cfg, log);
    if (cfg.command == "evolve") return cmd_evolve(cfg, log);
    if (cfg.command == "stability") return cmd_stability(cfg, log);
    if (cfg.command == "reference") return cmd_reference(cfg, log);
    return cmd_verify(cfg, log);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_error;
  }
}

}  // namespace vp
