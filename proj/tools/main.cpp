#include <iostream>

#include <CLI11.hpp>

#include "vortexpair/cli.hpp"

int main(int argc, char** argv) {
  vp::RunConfig cfg;
  CLI::App app{"Traveling vortex-pair maximizers: solve, sweep, evolve, stability, reference, verify"};
  app.set_config("--config", "", "key=value config file (keys are long option names)");
  app.option_defaults()->always_capture_default();

  std::string out = cfg.out.string();
  std::string grid;
  double r0 = 0.0;
  app.add_option("command", cfg.command, "solve | sweep | evolve | stability | reference | verify")
      ->required()
      ->check(CLI::IsMember({"solve", "sweep", "evolve", "stability", "reference", "verify"}));
  app.add_option("--profile", cfg.profile, "disk(a), cone(a) or a CSV path");
  app.add_option("--eps,--eps-list", cfg.eps, "concentration parameter(s), comma separated")->delimiter(',');
  app.add_option("--q", cfg.q, "impulse penalty (travel speed)");
  app.add_option("--grid", grid, "window override LxH:nx");
  app.add_option("--r0", r0, "constrained mode: support radius about x_hat");
  app.add_option("--out", out, "output directory");
  app.add_option("--p", cfg.p, "L^p exponent for the profile distance");
  app.add_option("--seed", cfg.seed, "recorded seed");
  app.add_option("--max-iters", cfg.max_iters, "ascent iteration cap");
  app.add_option("--tolerance", cfg.tolerance, "relative objective plateau tolerance");
  app.add_option("--cells-per-eps", cfg.cells_per_eps, "eps / h for auto-sized windows");
  app.add_option("--T", cfg.T, "evolution horizon (0: 0.5 eps)");
  app.add_option("--cfl", cfg.cfl, "time step as a fraction of h / (2 max|v|)");
  app.add_option("--snapshot-every", cfg.snapshot_every, "field snapshot stride in steps (0: none)");
  app.add_option("--perturbation", cfg.perturbation, "tilt | swap | split");
  app.add_option("--delta", cfg.delta, "perturbation size relative to ||zeta||_2");
  app.add_option("--lamb-radius", cfg.lamb_radius, "Lamb dipole radius");
  app.add_option("--lamb-speed", cfg.lamb_speed, "Lamb dipole speed");
  app.add_option("--vortex-kappa", cfg.vortex_kappa, "point-vortex circulation");
  app.add_option("--vortex-height", cfg.vortex_height, "point-vortex height");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return vp::exit_error;
  }
  cfg.out = out;
  if (!grid.empty()) cfg.grid = grid;
  if (app.count("--r0")) cfg.r0 = r0;
  return vp::run(cfg, std::cout, std::cerr);
}
