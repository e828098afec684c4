#include "mwo/holo/grid.hpp"

#include <cmath>

#include "mwo/error.hpp"

namespace mwo::holo {

namespace {

bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid Grid::line(std::size_t n, double dx) {
  Grid g{1, n, 1, dx, 0.0};
  g.validate();
  return g;
}

Grid Grid::plane(std::size_t nx, std::size_t ny, double dx, double dy) {
  Grid g{2, nx, ny, dx, dy};
  g.validate();
  return g;
}

void Grid::validate() const {
  if (dim != 1 && dim != 2) throw PreconditionError("grid: dimension must be 1 or 2");
  if (!power_of_two(nx) || nx < 64) throw PreconditionError("grid: samples per axis must be a power of two >= 64");
  if (!(dx > 0.0) || !std::isfinite(dx)) throw PreconditionError("grid: spacing must be positive");
  if (dim == 1) {
    if (ny != 1) throw PreconditionError("grid: a line has ny = 1");
  } else {
    if (!power_of_two(ny) || ny < 64) throw PreconditionError("grid: samples per axis must be a power of two >= 64");
    if (!(dy > 0.0) || !std::isfinite(dy)) throw PreconditionError("grid: spacing must be positive");
  }
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw PreconditionError(std::string(what) + ": grid mismatch");
}

void PotentialMap::validate() const {
  grid.validate();
  if (values.size() != grid.size()) throw PreconditionError("potential: sample count does not match the grid");
  for (double v : values)
    if (!std::isfinite(v)) throw PreconditionError("potential: values must be finite");
}

void ScalarField::validate() const {
  grid.validate();
  if (amplitude.size() != grid.size()) throw PreconditionError("field: sample count does not match the grid");
  // wavelength 0 marks a field that is never propagated (e.g. a GP orbital)
  if (!(wavelength >= 0.0) || !std::isfinite(wavelength)) throw PreconditionError("field: wavelength must be >= 0");
}

double ScalarField::power() const {
  double s = 0.0;
  for (const auto& a : amplitude) s += std::norm(a);
  return s * grid.cell_volume();
}

std::vector<double> ScalarField::intensity() const {
  std::vector<double> out(amplitude.size());
  for (std::size_t i = 0; i < amplitude.size(); ++i) out[i] = std::norm(amplitude[i]);
  return out;
}

}  // namespace mwo::holo
