#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace mwo::holo {

using Complex = std::complex<double>;

// Uniform 1D or 2D grid, x fastest. Coordinates are centred: sample i sits at
// (i - n/2) * spacing, so x = 0 is sample n/2.
struct Grid {
  int dim = 1;
  std::size_t nx = 0, ny = 1;
  double dx = 0.0, dy = 0.0;

  static Grid line(std::size_t n, double dx);
  static Grid plane(std::size_t nx, std::size_t ny, double dx, double dy);

  void validate() const;
  std::size_t size() const { return nx * ny; }
  double cell_volume() const { return dim == 1 ? dx : dx * dy; }
  double x(std::size_t i) const { return (static_cast<double>(i) - static_cast<double>(nx / 2)) * dx; }
  double y(std::size_t j) const { return (static_cast<double>(j) - static_cast<double>(ny / 2)) * dy; }
  double length_x() const { return static_cast<double>(nx) * dx; }
  double length_y() const { return static_cast<double>(ny) * dy; }
  std::size_t index(std::size_t i, std::size_t j = 0) const { return j * nx + i; }

  bool operator==(const Grid&) const = default;
};

void require_same_grid(const Grid& a, const Grid& b, const char* what);

// Potential in angular-frequency units (hbar = 1).
struct PotentialMap {
  Grid grid;
  std::vector<double> values;

  void validate() const;
};

// rho = max(mu - V, 0) / g, atoms per length^dim.
struct TFProfile {
  Grid grid;
  std::vector<double> density;
  double mu = 0.0;
  double g = 0.0;
  double N = 0.0;
};

// Complex amplitude on a grid. `wavelength` is the carrier wavelength used by
// propagation (de Broglie for atoms, optical for the writing light).
struct ScalarField {
  Grid grid;
  std::vector<Complex> amplitude;
  double wavelength = 0.0;
  std::vector<std::string> warnings;

  void validate() const;
  double power() const;  // sum |psi|^2 * cell volume
  std::vector<double> intensity() const;
};

}  // namespace mwo::holo
