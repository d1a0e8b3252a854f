#include "bplab/spectral/transform.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "bplab/errors.hpp"

namespace bplab::spectral {

namespace {

// Plans are created once per (n, sign) and executed through the new-array interface, which is
// thread safe. FFTW_ESTIMATE keeps plan choice, and therefore rounding, deterministic.
class PlanCache {
 public:
  fftw_plan get(int n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<Complex> scratch(static_cast<std::size_t>(n) * n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_2d(n, n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw ConfigError("FFTW could not create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void execute(const Grid2D& grid, std::vector<Complex>& data, int sign) {
  fftw_plan plan = plan_cache().get(grid.n(), sign);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

// The box origin sits at -L/2, so exp(i xi . x) picks up (-1)^(k1 + k2) relative to the DFT kernel.
void apply_checkerboard(const Grid2D& grid, std::vector<Complex>& data, double scale) {
  const int n = grid.n();
  for (int i2 = 0; i2 < n; ++i2) {
    for (int i1 = 0; i1 < n; ++i1) {
      const double s = ((i1 + i2) & 1) ? -scale : scale;
      data[grid.flat(i1, i2)] *= s;
    }
  }
}

}  // namespace

std::vector<Complex> synthesize(const Grid2D& grid, std::span<const Complex> modes) {
  std::vector<Complex> data(modes.begin(), modes.end());
  if (data.size() != grid.size()) throw ConfigError("mode count does not match grid");
  apply_checkerboard(grid, data, 1.0);
  execute(grid, data, FFTW_BACKWARD);
  return data;
}

std::vector<Complex> analyze(const Grid2D& grid, std::span<const Complex> samples) {
  std::vector<Complex> data(samples.begin(), samples.end());
  if (data.size() != grid.size()) throw ConfigError("sample count does not match grid");
  execute(grid, data, FFTW_FORWARD);
  apply_checkerboard(grid, data, 1.0 / static_cast<double>(grid.size()));
  return data;
}

SpectralField2D transform_forward(const RealField2D& field) {
  std::vector<Complex> data(field.samples.begin(), field.samples.end());
  return SpectralField2D(field.grid, analyze(field.grid, data));
}

RealField2D transform_inverse(const SpectralField2D& field) {
  auto data = synthesize(field.grid, field.modes);
  RealField2D out(field.grid);
  for (std::size_t i = 0; i < data.size(); ++i) out.samples[i] = data[i].real();
  return out;
}

std::pair<RealField2D, RealField2D> transform_inverse_pair(const SpectralField2D& a,
                                                           const SpectralField2D& b) {
  if (!(a.grid == b.grid)) throw ConfigError("fields live on different grids");
  std::vector<Complex> packed(a.modes.size());
  const Complex i{0.0, 1.0};
  for (std::size_t k = 0; k < packed.size(); ++k) packed[k] = a.modes[k] + i * b.modes[k];
  auto data = synthesize(a.grid, packed);
  RealField2D ra(a.grid), rb(a.grid);
  for (std::size_t k = 0; k < data.size(); ++k) {
    ra.samples[k] = data[k].real();
    rb.samples[k] = data[k].imag();
  }
  return {std::move(ra), std::move(rb)};
}

}  // namespace bplab::spectral
