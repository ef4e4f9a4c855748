#include "vortexpair/kernel.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <mutex>
#include <numbers>

namespace vp {

namespace {

constexpr double kInv2Pi = 0.5 / std::numbers::pi;

// FFTW's planner is not thread-safe; execution on fresh buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

double green(Point x, Point y) {
  const double d1 = x.x1 - y.x1;
  const double dm = x.x2 - y.x2;
  const double dp = x.x2 + y.x2;
  const double r2 = d1 * d1 + dm * dm;
  if (r2 == 0.0) throw Error("kernel singularity");
  return kInv2Pi * 0.5 * std::log((d1 * d1 + dp * dp) / r2);
}

Point green_gradient(Point x, Point y) {
  const double d1 = x.x1 - y.x1;
  const double dm = x.x2 - y.x2;
  const double dp = x.x2 + y.x2;
  const double r2 = d1 * d1 + dm * dm;
  if (r2 == 0.0) throw Error("kernel singularity");
  const double i2 = d1 * d1 + dp * dp;
  return {kInv2Pi * d1 * (1.0 / i2 - 1.0 / r2), kInv2Pi * (dp / i2 - dm / r2)};
}

double self_cell_integral(double h) { return h * h * (0.5 - std::log(h / std::sqrt(std::numbers::pi))); }

double VelocityField::max_speed() const {
  double m = 0.0;
  for (std::size_t k = 0; k < v1.size(); ++k) m = std::max(m, std::hypot(v1[k], v2[k]));
  return m;
}

/// Zero-padded FFT convolution of a grid field with translation-invariant
/// lattice kernels. Each operator is a pair: a free-space kernel indexed by
/// (i - i', j - j') and an image kernel indexed by (i - i', j + j').
class LatticeConvolver {
 public:
  using FreeKernel = std::function<double(int, int)>;
  using ImageKernel = std::function<double(int, int)>;

  struct Spectra {
    std::vector<std::complex<double>> free;
    std::vector<std::complex<double>> image;
  };

  explicit LatticeConvolver(const Grid& g)
      : h_(g.h()), nx_(g.nx()), ny_(g.ny()), px_(2 * g.nx()), py_(2 * g.ny()) {
    const std::size_t nreal = static_cast<std::size_t>(px_) * py_;
    std::vector<double> in(nreal);
    std::vector<std::complex<double>> out(spectrum_size());
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_r2c_2d(py_, px_, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
    backward_ = fftw_plan_dft_c2r_2d(py_, px_, reinterpret_cast<fftw_complex*>(out.data()), in.data(),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
  }

  ~LatticeConvolver() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  LatticeConvolver(const LatticeConvolver&) = delete;
  LatticeConvolver& operator=(const LatticeConvolver&) = delete;

  std::size_t spectrum_size() const { return static_cast<std::size_t>(py_) * (px_ / 2 + 1); }

  Spectra make_spectra(const FreeKernel& free, const ImageKernel& image) const {
    std::vector<double> table(static_cast<std::size_t>(px_) * py_, 0.0);
    for (int dj = -(ny_ - 1); dj <= ny_ - 1; ++dj)
      for (int di = -(nx_ - 1); di <= nx_ - 1; ++di) table[slot(wrap(di, px_), wrap(dj, py_))] = free(di, dj);
    Spectra s;
    s.free = forward(table);

    std::fill(table.begin(), table.end(), 0.0);
    for (int sum = 0; sum <= 2 * ny_ - 2; ++sum)
      for (int di = -(nx_ - 1); di <= nx_ - 1; ++di) table[slot(wrap(di, px_), sum)] = image(di, sum);
    s.image = forward(table);
    return s;
  }

  /// out_i = sum_j free(i - j) f_j + sum_j image(i1 - j1, i2 + j2) f_j.
  std::vector<double> apply(const Spectra& s, std::span<const double> f) const {
    std::vector<double> padded(static_cast<std::size_t>(px_) * py_, 0.0);
    for (int j = 0; j < ny_; ++j)
      for (int i = 0; i < nx_; ++i) padded[slot(i, j)] = f[static_cast<std::size_t>(j) * nx_ + i];
    auto spec_free = forward(padded);

    // Row-flipped copy turns the j + j' dependence into a convolution whose
    // result for row j sits at padded row j + ny - 1.
    std::fill(padded.begin(), padded.end(), 0.0);
    for (int j = 0; j < ny_; ++j)
      for (int i = 0; i < nx_; ++i) padded[slot(i, ny_ - 1 - j)] = f[static_cast<std::size_t>(j) * nx_ + i];
    auto spec_image = forward(padded);

    for (std::size_t k = 0; k < spec_free.size(); ++k) {
      spec_free[k] *= s.free[k];
      spec_image[k] *= s.image[k];
    }
    const auto free_part = backward(spec_free);
    const auto image_part = backward(spec_image);

    const double norm = 1.0 / (static_cast<double>(px_) * py_);
    std::vector<double> out(static_cast<std::size_t>(nx_) * ny_);
    for (int j = 0; j < ny_; ++j)
      for (int i = 0; i < nx_; ++i)
        out[static_cast<std::size_t>(j) * nx_ + i] = norm * (free_part[slot(i, j)] + image_part[slot(i, j + ny_ - 1)]);
    return out;
  }

  const Spectra& stream() const { return stream_; }
  void set_stream(Spectra s) { stream_ = std::move(s); }

  const Spectra& velocity1() const {
    init_velocity();
    return vel1_;
  }
  const Spectra& velocity2() const {
    init_velocity();
    return vel2_;
  }

 private:
  static int wrap(int d, int n) { return d < 0 ? d + n : d; }
  std::size_t slot(int i, int j) const { return static_cast<std::size_t>(j) * px_ + i; }

  std::vector<std::complex<double>> forward(std::vector<double>& in) const {
    std::vector<std::complex<double>> out(spectrum_size());
    fftw_execute_dft_r2c(forward_, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
  }

  std::vector<double> backward(std::vector<std::complex<double>>& in) const {
    std::vector<double> out(static_cast<std::size_t>(px_) * py_);
    fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex*>(in.data()), out.data());
    return out;
  }

  void init_velocity() const {
    std::call_once(vel_once_, [this] {
      const double c = h_ * kInv2Pi;
      // v1 = h^2 sum d/dx2 G, v2 = -h^2 sum d/dx1 G, in lattice units.
      vel1_ = make_spectra(
          [c](int di, int dj) { return (di == 0 && dj == 0) ? 0.0 : -c * dj / double(di * di + dj * dj); },
          [c](int di, int s) { return c * (s + 1) / double(di * di + (s + 1) * (s + 1)); });
      vel2_ = make_spectra(
          [c](int di, int dj) { return (di == 0 && dj == 0) ? 0.0 : c * di / double(di * di + dj * dj); },
          [c](int di, int s) { return -c * di / double(di * di + (s + 1) * (s + 1)); });
    });
  }

  double h_;
  int nx_, ny_, px_, py_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
  Spectra stream_;
  mutable std::once_flag vel_once_;
  mutable Spectra vel1_, vel2_;
};

KernelEvaluator::KernelEvaluator(const Grid& grid, KernelMode mode)
    : grid_(grid), mode_(mode), self_cell_constant_(self_cell_integral(grid.h())) {
  if (!grid.is_half_plane()) throw Error("kernel: grid must be a half-plane window");
  auto conv = std::make_shared<LatticeConvolver>(grid);
  const double h = grid.h();
  const double h2 = h * h;
  const double self = self_cell_constant_;
  conv->set_stream(conv->make_spectra(
      [=](int di, int dj) {
        if (di == 0 && dj == 0) return kInv2Pi * self;
        return -kInv2Pi * h2 * std::log(h * std::sqrt(double(di * di + dj * dj)));
      },
      [=](int di, int s) { return kInv2Pi * h2 * std::log(h * std::sqrt(double(di * di + (s + 1) * (s + 1)))); }));
  conv_ = std::move(conv);
}

KernelEvaluator::~KernelEvaluator() = default;
KernelEvaluator::KernelEvaluator(const KernelEvaluator&) = default;
KernelEvaluator& KernelEvaluator::operator=(const KernelEvaluator&) = default;
KernelEvaluator::KernelEvaluator(KernelEvaluator&&) noexcept = default;
KernelEvaluator& KernelEvaluator::operator=(KernelEvaluator&&) noexcept = default;

const LatticeConvolver& KernelEvaluator::convolver() const { return *conv_; }

void KernelEvaluator::check_field(const ScalarField& f) const {
  if (!(f.grid() == grid_)) throw Error("kernel: field grid does not match evaluator grid");
}

double KernelEvaluator::diagonal(int row) const {
  const double h = grid_.h();
  return kInv2Pi * (self_cell_constant_ + h * h * std::log(2.0 * grid_.x2(row)));
}

ScalarField KernelEvaluator::apply_G(const ScalarField& f) const {
  return mode_ == KernelMode::fast ? fast_apply_G(f) : apply_G_direct(f);
}

ScalarField KernelEvaluator::apply_G_direct(const ScalarField& f) const {
  check_field(f);
  const double h2 = grid_.cell_area();
  std::vector<std::size_t> sources;
  for (std::size_t k = 0; k < f.size(); ++k)
    if (f[k] != 0.0) sources.push_back(k);

  ScalarField psi(grid_, FieldKind::stream);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Point x = grid_.center(i);
    double s = 0.0;
    for (std::size_t j : sources) {
      if (j == i) continue;
      s += green(x, grid_.center(j)) * f[j];
    }
    psi[i] = h2 * s + f[i] * diagonal(grid_.row(i));
  }
  return psi;
}

ScalarField KernelEvaluator::fast_apply_G(const ScalarField& f) const {
  check_field(f);
  const auto& c = convolver();
  return ScalarField(grid_, c.apply(c.stream(), f.values()), FieldKind::stream);
}

VelocityField KernelEvaluator::velocity(const ScalarField& f) const {
  return mode_ == KernelMode::fast ? velocity_fast(f) : velocity_direct(f);
}

VelocityField KernelEvaluator::velocity_direct(const ScalarField& f) const {
  check_field(f);
  const double h2 = grid_.cell_area();
  std::vector<std::size_t> sources;
  for (std::size_t k = 0; k < f.size(); ++k)
    if (f[k] != 0.0) sources.push_back(k);

  VelocityField v{grid_, std::vector<double>(f.size(), 0.0), std::vector<double>(f.size(), 0.0)};
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Point x = grid_.center(i);
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t j : sources) {
      Point grad;
      if (j == i) {
        // Image-only part: d/dx2 of (1/2pi) ln|x - xbar| at x = y is 1/(4 pi x2).
        grad = {0.0, kInv2Pi / (2.0 * x.x2)};
      } else {
        grad = green_gradient(x, grid_.center(j));
      }
      s1 += grad.x2 * f[j];
      s2 -= grad.x1 * f[j];
    }
    v.v1[i] = h2 * s1;
    v.v2[i] = h2 * s2;
  }
  return v;
}

VelocityField KernelEvaluator::velocity_fast(const ScalarField& f) const {
  check_field(f);
  const auto& c = convolver();
  return {grid_, c.apply(c.velocity1(), f.values()), c.apply(c.velocity2(), f.values())};
}

double KernelEvaluator::stream_at(const ScalarField& f, Point x) const {
  check_field(f);
  const double h2 = grid_.cell_area();
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (f[j] == 0.0) continue;
    const Point y = grid_.center(j);
    if (x == y)
      s += f[j] * diagonal(grid_.row(j));
    else
      s += h2 * green(x, y) * f[j];
  }
  return s;
}

}  // namespace vp
