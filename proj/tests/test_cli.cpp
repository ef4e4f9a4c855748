#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vortexpair/cli.hpp"
#include "vortexpair/field_io.hpp"

using namespace vp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vortexpair_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

int run_cli(const std::string& args) {
  const char* exe = std::getenv("VORTEXPAIR_CLI");
  REQUIRE_MESSAGE(exe != nullptr, "VORTEXPAIR_CLI is not set");
  const int status = std::system((std::string(exe) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig sweep_config(const fs::path& out) {
  RunConfig cfg;
  cfg.command = "sweep";
  cfg.eps = {0.4, 0.2, 0.1, 0.05};
  cfg.out = out;
  return cfg;
}

}  // namespace

TEST_CASE("empty report has only the header") {
  const fs::path dir = scratch("empty");
  SweepReport rep;
  rep.profile = "disk(1)";
  emit_report(rep, {}, dir);
  const auto l = lines(dir / "report.csv");
  REQUIRE(l.size() == 1);
  CHECK(l[0].rfind("eps,ok,error,h,objective", 0) == 0);
  CHECK(lines(dir / "log.csv").size() == 1);
  fs::remove_all(dir);
}

TEST_CASE("eps stems") {
  CHECK(eps_stem(0.1) == "eps_0.1");
  CHECK(eps_stem(0.05) == "eps_0.05");
  CHECK(eps_stem(1.0) == "eps_1");
}

TEST_CASE("sweep writes a reproducible, verifiable report") {
  const fs::path a = scratch("sweep_a"), b = scratch("sweep_b");
  std::ostringstream log, err;
  CHECK(run(sweep_config(a), log, err) == exit_error);  // the eps = 0.4 row fails
  CHECK(log.str().find("eps=0.4 failed: support touches boundary") != std::string::npos);

  const auto rows = lines(a / "report.csv");
  REQUIRE(rows.size() == 5);
  CHECK(rows[1].rfind("0.4,0,support touches boundary", 0) == 0);
  CHECK(rows[4].rfind("0.05,1,", 0) == 0);
  for (const char* stem : {"eps_0.2", "eps_0.1", "eps_0.05"}) {
    CHECK(fs::exists(a / "fields" / (std::string(stem) + ".bin")));
    CHECK(fs::exists(a / "fields" / (std::string(stem) + ".json")));
  }
  CHECK_FALSE(fs::exists(a / "fields" / "eps_0.4.bin"));

  const auto verdicts = nlohmann::json::parse(slurp(a / "verdicts.json"));
  for (const auto& [name, v] : verdicts.at("verdicts").items()) CHECK_MESSAGE(v.at("status") == "pass", name);

  const VerifyResult v = verify_report(a);
  CHECK(v.rows == 3);
  CHECK(v.mismatches == 0);
  CHECK(v.max_relative_error == 0.0);

  run(sweep_config(b), log, err);
  for (const char* f : {"report.csv", "log.csv", "verdicts.json", "fields/eps_0.1.bin", "fields/eps_0.05.json"})
    CHECK_MESSAGE(slurp(a / f) == slurp(b / f), f);

  // A tampered field is caught.
  FieldDump d = read_field_dump(a / "fields" / "eps_0.1");
  const CellSet s = support(d.field);
  d.field[s.cells.front()] = 0.0;
  write_field_dump(d.field, a / "fields" / "eps_0.1", d.header);
  CHECK(verify_report(a).mismatches > 0);

  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("solve writes result, field and log") {
  const fs::path dir = scratch("solve");
  RunConfig cfg;
  cfg.command = "solve";
  cfg.eps = {0.2};
  cfg.out = dir;
  std::ostringstream log, err;
  REQUIRE(run(cfg, log, err) == exit_ok);
  const auto j = nlohmann::json::parse(slurp(dir / "result.json"));
  for (const char* key : {"T_eps", "mu", "centroid", "diam", "iterations", "grid"})
    CHECK_MESSAGE(j.contains(key), key);
  CHECK(j.at("eps") == 0.2);
  const FieldDump d = read_field_dump(dir / "fields" / "eps_0.2");
  CHECK(d.field.integral() == doctest::Approx(std::numbers::pi).epsilon(1e-12));
  CHECK(lines(dir / "log.csv").front() == "iteration,objective,mu,support_size");
  fs::remove_all(dir);
}

TEST_CASE("configuration errors map to exit code 2") {
  std::ostringstream log, err;
  RunConfig cfg;
  cfg.command = "solve";
  cfg.eps = {0.2};
  cfg.grid = "0.3x0.3:24";
  cfg.out = scratch("tiny");
  CHECK(run(cfg, log, err) == exit_error);
  CHECK(err.str().find("support touches boundary") != std::string::npos);

  cfg = RunConfig{};
  cfg.command = "dance";
  CHECK(run(cfg, log, err) == exit_error);
  cfg.command = "solve";
  cfg.eps = {0.2, 0.1};
  CHECK(run(cfg, log, err) == exit_error);
  cfg.eps = {0.1};
  cfg.q = -1.0;
  CHECK(run(cfg, log, err) == exit_error);
  fs::remove_all(scratch("tiny"));
}

TEST_CASE("command-line binary") {
  const fs::path dir = scratch("bin");
  CHECK(run_cli("dance") == 2);
  CHECK(run_cli("solve --eps 0.2 --grid 0.3x0.3:24 --out " + dir.string()) == 2);
  CHECK(run_cli("solve --eps 0.2 --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "result.json"));

  const fs::path conf = dir / "run.conf";
  {
    std::ofstream out(conf);
    out << "eps=0.2\nout=" << (dir / "from_config").string() << "\n";
  }
  CHECK(run_cli("solve --config " + conf.string()) == 0);
  CHECK(fs::exists(dir / "from_config" / "result.json"));
  fs::remove_all(dir);
}
