#include "vortexpair/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <regex>
#include <sstream>

namespace vp {

ReferenceProfile ReferenceProfile::disk(double a) {
  if (!(a > 0.0)) throw Error("disk profile: radius must be positive");
  ReferenceProfile p;
  std::ostringstream os;
  os << "disk(" << a << ")";
  p.name_ = os.str();
  p.eval_ = [a](Point x) { return std::hypot(x.x1, x.x2) < a ? 1.0 : 0.0; };
  p.kappa_ = std::numbers::pi * a * a;
  p.radius_ = a;
  p.support_area_ = std::numbers::pi * a * a;
  return p;
}

ReferenceProfile ReferenceProfile::cone(double a) {
  if (!(a > 0.0)) throw Error("cone profile: radius must be positive");
  ReferenceProfile p;
  std::ostringstream os;
  os << "cone(" << a << ")";
  p.name_ = os.str();
  p.eval_ = [a](Point x) { return std::max(0.0, 1.0 - std::hypot(x.x1, x.x2) / a); };
  p.kappa_ = std::numbers::pi * a * a / 3.0;
  p.radius_ = a;
  p.support_area_ = std::numbers::pi * a * a;
  return p;
}

ReferenceProfile ReferenceProfile::from_samples(ScalarField samples, std::string name) {
  samples = samples.with_kind(FieldKind::vorticity);
  samples.validate();
  const double kappa = samples.integral();
  if (!(kappa > 0.0)) throw Error("profile '" + name + "': empty profile");

  ReferenceProfile p;
  p.name_ = std::move(name);
  p.kappa_ = kappa;
  const Grid& g = samples.grid();
  std::size_t count = 0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (samples[k] <= 0.0) continue;
    ++count;
    const Point c = g.center(k);
    p.radius_ = std::max(p.radius_, std::hypot(c.x1, c.x2) + std::sqrt(0.5) * g.h());
  }
  p.support_area_ = count * g.cell_area();
  p.samples_ = samples;
  p.eval_ = [s = std::move(samples)](Point x) {
    const long k = s.grid().locate(x);
    return k < 0 ? 0.0 : s[static_cast<std::size_t>(k)];
  };
  return p;
}

ReferenceProfile ReferenceProfile::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read profile " + path.string());
  struct Row {
    double x1, x2, v;
  };
  std::vector<Row> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    Row r{};
    if (!(ls >> r.x1 >> r.x2 >> r.v)) {
      if (first) {
        first = false;
        continue;
      }
      throw Error("profile " + path.string() + ": malformed line '" + line + "'");
    }
    first = false;
    if (!std::isfinite(r.v) || r.v < 0.0) throw Error("profile " + path.string() + ": negative value");
    rows.push_back(r);
  }
  if (rows.empty()) throw Error("profile " + path.string() + ": empty profile");

  std::vector<double> xs, ys;
  for (const Row& r : rows) {
    xs.push_back(r.x1);
    ys.push_back(r.x2);
  }
  auto uniq = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  uniq(xs);
  uniq(ys);
  double h = 0.0;
  auto spacing = [&h](const std::vector<double>& v) {
    for (std::size_t k = 1; k < v.size(); ++k) {
      const double d = v[k] - v[k - 1];
      if (h == 0.0 || d < h) h = d;
    }
  };
  spacing(xs);
  spacing(ys);
  if (h == 0.0) h = 1.0;
  const int nx = static_cast<int>(std::lround((xs.back() - xs.front()) / h)) + 1;
  const int ny = static_cast<int>(std::lround((ys.back() - ys.front()) / h)) + 1;
  const Grid g = Grid::with_origin(h, nx, ny, {xs.front() - 0.5 * h, ys.front() - 0.5 * h});
  ScalarField f(g, FieldKind::vorticity);
  for (const Row& r : rows) {
    const int i = static_cast<int>(std::lround((r.x1 - xs.front()) / h));
    const int j = static_cast<int>(std::lround((r.x2 - ys.front()) / h));
    if (std::abs(r.x1 - g.x1(i)) > 1e-6 * h || std::abs(r.x2 - g.x2(j)) > 1e-6 * h)
      throw Error("profile " + path.string() + ": samples are not on a uniform lattice");
    f.at(i, j) = r.v;
  }
  return from_samples(std::move(f), path.string());
}

ReferenceProfile ReferenceProfile::parse(const std::string& spec) {
  static const std::regex builtin(R"(\s*(disk|cone)\s*\(\s*([0-9eE.+-]+)\s*\)\s*)");
  std::smatch m;
  if (std::regex_match(spec, m, builtin)) {
    double a = 0.0;
    try {
      a = std::stod(m[2].str());
    } catch (const std::exception&) {
      throw Error("profile '" + spec + "': bad radius");
    }
    return m[1] == "disk" ? disk(a) : cone(a);
  }
  if (spec.find('(') != std::string::npos) throw Error("unknown profile '" + spec + "'");
  return from_csv(spec);
}

LoadedProfile load_profile(const ReferenceProfile& rho, double h_ref) {
  if (!(h_ref > 0.0)) throw Error("load_profile: spacing must be positive");
  const int n = 2 * static_cast<int>(std::ceil(rho.radius() / h_ref)) + 2;
  const Grid g = Grid::centered(h_ref, n, n);
  ScalarField f(g, FieldKind::vorticity);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = rho(g.center(k));
  const double raw = f.integral();
  if (!(raw > 0.0)) throw Error("profile '" + rho.name() + "': empty profile at this resolution");
  LoadedProfile out{f.scaled(rho.kappa() / raw), rho.kappa(), raw};
  return out;
}

LoadedProfile load_profile(const std::string& spec, double h_ref) {
  return load_profile(ReferenceProfile::parse(spec), h_ref);
}

}  // namespace vp
