#include <doctest.h>

#include <cmath>

#include "mwo/error.hpp"
#include "mwo/holo/thomas_fermi.hpp"
#include "mwo/holo/optics.hpp"

using namespace mwo;
using namespace mwo::holo;

namespace {

// sodium, 20 Hz, R = 60 um; V in rad/s
constexpr double kOmega = 2.0 * 3.141592653589793 * 20.0;
const double kMw2 = kSodiumMass / kHbar * kOmega * kOmega;

double integral(const TFProfile& p) {
  double s = 0.0;
  for (double r : p.density) s += r;
  return s * p.grid.cell_volume();
}

}  // namespace

TEST_CASE("grid rejects bad shapes") {
  CHECK_THROWS_AS(Grid::line(100, 1e-6), PreconditionError);
  CHECK_THROWS_AS(Grid::line(32, 1e-6), PreconditionError);
  CHECK_THROWS_AS(Grid::line(64, 0.0), PreconditionError);
  CHECK_THROWS_AS(Grid::plane(64, 48, 1e-6, 1e-6), PreconditionError);
  const auto g = Grid::line(64, 2.0);
  CHECK(g.x(32) == 0.0);
  CHECK(g.x(0) == -64.0);
}

TEST_CASE("flat box gives mu = gN/L") {
  const auto grid = Grid::line(256, 0.5);
  PotentialMap V{grid, std::vector<double>(grid.size(), 3.0)};
  const auto p = thomas_fermi_density(V, 2.0, 1000.0);
  CHECK(p.mu - 3.0 == doctest::Approx(2.0 * 1000.0 / 128.0).epsilon(1e-9));
  for (double r : p.density) CHECK(r == doctest::Approx(1000.0 / 128.0).epsilon(1e-9));
}

TEST_CASE("harmonic mu matches the closed form") {
  const double R = 60e-6, N = 1e5;
  const double mu0 = 0.5 * kMw2 * R * R;
  const double g = 4.0 * mu0 * R / (3.0 * N);
  CHECK(harmonic_mu_1d(kMw2, g, N) == doctest::Approx(mu0).epsilon(1e-12));
  // the sum over a kinked profile converges as (dx/R)^2, so a fine grid
  const auto grid = Grid::line(4096, 0.05e-6);
  const auto V = harmonic_potential(grid, kMw2);
  const double mu = solve_chemical_potential(V, g, N);
  CHECK(std::abs(mu / mu0 - 1.0) < 1e-6);
}

TEST_CASE("profile invariants: normalization and affinity") {
  const auto grid = Grid::line(1024, 0.25e-6);
  auto V = harmonic_potential(grid, kMw2);
  for (std::size_t i = 0; i < grid.nx; ++i) V.values[i] += 300.0 * std::sin(grid.x(i) * 3e5);
  const double g = 8e-6, N = 5e4;
  const auto p = thomas_fermi_density(V, g, N);
  CHECK(std::abs(integral(p) / N - 1.0) < 1e-8);
  for (std::size_t i = 0; i < grid.nx; ++i) {
    CHECK(p.density[i] >= 0.0);
    if (p.density[i] > 0.0)
      CHECK(g * p.density[i] + V.values[i] == doctest::Approx(p.mu).epsilon(1e-12));
    else
      CHECK(V.values[i] >= p.mu);
  }
}

TEST_CASE("rectangular well raises the density by u/g") {
  const auto grid = Grid::line(1024, 0.25e-6);
  const auto bare = harmonic_potential(grid, kMw2);
  auto V = bare;
  const double u = 500.0, g = 8e-6;
  for (std::size_t i = 0; i < grid.nx; ++i)
    if (std::abs(grid.x(i)) < 10e-6) V.values[i] -= u;
  const auto p0 = thomas_fermi_density(bare, g, 1e5);
  const auto p1 = thomas_fermi_density(V, g, 1e5);
  // outside the well only mu moves; inside it moves by u/g more
  const double shift = p1.density[grid.nx / 2 + 100] - p0.density[grid.nx / 2 + 100];
  CHECK(shift == doctest::Approx((p1.mu - p0.mu) / g).epsilon(1e-9));
  CHECK(p1.density[grid.nx / 2] - p0.density[grid.nx / 2] - shift == doctest::Approx(u / g).epsilon(1e-9));
}

TEST_CASE("mu tends to min V as N -> 0") {
  const auto grid = Grid::line(512, 0.25e-6);
  auto V = harmonic_potential(grid, kMw2);
  for (auto& v : V.values) v -= 40.0;
  const double mu = solve_chemical_potential(V, 8e-6, 1e-3);
  CHECK(mu > -40.0);
  CHECK(mu < -40.0 + 1.0);
}

TEST_CASE("preconditions") {
  const auto grid = Grid::line(64, 1.0);
  PotentialMap V{grid, std::vector<double>(64, 0.0)};
  CHECK_THROWS_AS(solve_chemical_potential(V, 0.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(solve_chemical_potential(V, 1.0, 0.0), PreconditionError);
  V.values[3] = INFINITY;
  CHECK_THROWS_AS(solve_chemical_potential(V, 1.0, 1.0), PreconditionError);
  V.values.resize(10);
  CHECK_THROWS_AS(solve_chemical_potential(V, 1.0, 1.0), PreconditionError);
}

TEST_CASE("2D harmonic profile normalizes") {
  const auto grid = Grid::plane(128, 128, 1e-6, 1e-6);
  const auto V = harmonic_potential(grid, kMw2, 2.0 * kMw2);
  const auto p = thomas_fermi_density(V, 1e-12, 1e4);
  CHECK(std::abs(integral(p) / 1e4 - 1.0) < 1e-8);
  // elliptical support: narrower along y
  std::size_t wx = 0, wy = 0;
  for (std::size_t i = 0; i < 128; ++i) {
    wx += p.density[grid.index(i, 64)] > 0.0;
    wy += p.density[grid.index(64, i)] > 0.0;
  }
  CHECK(wy < wx);
}
