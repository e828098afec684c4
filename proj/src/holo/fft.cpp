#include "mwo/holo/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "mwo/error.hpp"

namespace mwo::holo {

namespace {

// FFTW planning is not thread-safe; execution with new-array calls is. Plans
// are cached per shape and direction and never destroyed.
std::mutex g_plan_mutex;

struct Buffer {
  fftw_complex* p = nullptr;
  explicit Buffer(std::size_t n) : p(fftw_alloc_complex(n)) {
    if (!p) throw NumericalError("fft: allocation failed");
  }
  ~Buffer() { fftw_free(p); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
};

fftw_plan plan_for(const Grid& grid, int sign) {
  static std::map<std::tuple<int, std::size_t, std::size_t, int>, fftw_plan> cache;
  const auto key = std::make_tuple(grid.dim, grid.nx, grid.ny, sign);
  std::lock_guard lock(g_plan_mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  Buffer in(grid.size()), out(grid.size());
  fftw_plan p = grid.dim == 1
                    ? fftw_plan_dft_1d(static_cast<int>(grid.nx), in.p, out.p, sign, FFTW_ESTIMATE)
                    // row-major with x fastest: slowest dimension first
                    : fftw_plan_dft_2d(static_cast<int>(grid.ny), static_cast<int>(grid.nx), in.p, out.p, sign,
                                       FFTW_ESTIMATE);
  if (!p) throw NumericalError("fft: planning failed");
  cache.emplace(key, p);
  return p;
}

void run(std::vector<Complex>& data, const Grid& grid, int sign) {
  if (data.size() != grid.size()) throw PreconditionError("fft: sample count does not match the grid");
  const fftw_plan p = plan_for(grid, sign);
  Buffer in(data.size()), out(data.size());
  std::memcpy(in.p, data.data(), data.size() * sizeof(Complex));
  fftw_execute_dft(p, in.p, out.p);
  std::memcpy(static_cast<void*>(data.data()), out.p, data.size() * sizeof(Complex));
}

}  // namespace

void fft_forward(std::vector<Complex>& data, const Grid& grid) { run(data, grid, FFTW_FORWARD); }

void fft_inverse(std::vector<Complex>& data, const Grid& grid) {
  run(data, grid, FFTW_BACKWARD);
  const double s = 1.0 / static_cast<double>(grid.size());
  for (auto& v : data) v *= s;
}

std::vector<double> fft_frequencies(std::size_t n, double spacing) {
  std::vector<double> f(n);
  const double df = 1.0 / (static_cast<double>(n) * spacing);
  for (std::size_t j = 0; j < n; ++j) {
    const auto k = static_cast<double>(j) - (j < n / 2 ? 0.0 : static_cast<double>(n));
    f[j] = k * df;
  }
  return f;
}

}  // namespace mwo::holo
