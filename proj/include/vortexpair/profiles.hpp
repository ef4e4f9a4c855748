#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "vortexpair/grid.hpp"

namespace vp {

/// The unscaled vorticity profile rho >= 0, in coordinates relative to the
/// profile's own origin. Built-ins are analytic; CSV profiles are sampled and
/// looked up by nearest sample.
class ReferenceProfile {
 public:
  /// Indicator of the radius-a disk, kappa = pi a^2.
  static ReferenceProfile disk(double a);
  /// max(0, 1 - |x|/a), kappa = pi a^2 / 3.
  static ReferenceProfile cone(double a);
  static ReferenceProfile from_samples(ScalarField samples, std::string name);
  /// Rows "x1,x2,value" on a uniform square lattice; a non-numeric first
  /// line is treated as a header.
  static ReferenceProfile from_csv(const std::filesystem::path& path);
  /// "disk(a)", "cone(a)" or a path to a CSV file.
  static ReferenceProfile parse(const std::string& spec);

  const std::string& name() const { return name_; }
  double operator()(Point x) const { return eval_(x); }
  double kappa() const { return kappa_; }
  /// Largest distance from the origin to the support.
  double radius() const { return radius_; }
  /// Measure of the support.
  double support_area() const { return support_area_; }
  bool analytic() const { return !samples_.has_value(); }
  /// Lattice of a sampled profile.
  const std::optional<ScalarField>& samples() const { return samples_; }

 private:
  std::string name_;
  std::function<double(Point)> eval_;
  double kappa_ = 0.0;
  double radius_ = 0.0;
  double support_area_ = 0.0;
  std::optional<ScalarField> samples_;
};

struct LoadedProfile {
  ScalarField field;   ///< sampled on a centered lattice, renormalized to kappa
  double kappa = 0.0;
  double raw_kappa = 0.0;  ///< h^2 sum of the samples before renormalization
};

/// Samples a profile on a centered lattice of spacing h_ref covering its
/// support and pins the total mass to kappa.
LoadedProfile load_profile(const std::string& spec, double h_ref);
LoadedProfile load_profile(const ReferenceProfile& rho, double h_ref);

}  // namespace vp
