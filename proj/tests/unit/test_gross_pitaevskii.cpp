#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "mwo/error.hpp"
#include "mwo/holo/gross_pitaevskii.hpp"
#include "mwo/holo/optics.hpp"
#include "mwo/holo/thomas_fermi.hpp"

using namespace mwo;
using namespace mwo::holo;

namespace {

constexpr double kOmega = 2.0 * 3.141592653589793 * 20.0;
const double kHm = kHbar / kSodiumMass;  // hbar / M
const double kMw2 = kOmega * kOmega / kHm;

double norm_of(const ScalarField& f) { return f.power(); }

}  // namespace

TEST_CASE("linear limit: oscillator Gaussian") {
  const auto grid = Grid::line(256, 0.25e-6);
  const auto V = harmonic_potential(grid, kMw2);
  GPOptions opt;
  opt.hbar_over_mass = kHm;
  opt.dt = 1e-4;
  opt.initial = std::vector<Complex>(grid.size(), 1.0);  // start far from the answer
  const auto r = gp_ground_state(V, 0.0, 10.0, opt);
  CHECK(norm_of(r.phi) == doctest::Approx(10.0).epsilon(1e-12));
  // |phi|^2 ~ exp(-x^2 / l^2), l^2 = hbar / (M omega)
  const double l2 = kHm / kOmega;
  double m2 = 0.0;
  for (std::size_t i = 0; i < grid.nx; ++i) m2 += grid.x(i) * grid.x(i) * std::norm(r.phi.amplitude[i]) * grid.dx;
  CHECK(m2 / 10.0 == doctest::Approx(0.5 * l2).epsilon(1e-3));
  CHECK(r.energy / 10.0 == doctest::Approx(0.5 * kOmega).epsilon(1e-3));
}

TEST_CASE("strong coupling: bulk agrees with Thomas-Fermi, energy ordering, monotone descent") {
  const auto grid = Grid::line(1024, 0.25e-6);
  const auto V = harmonic_potential(grid, kMw2);
  const double R = 60e-6, N = 1e5;
  const double g = 4.0 * (0.5 * kMw2 * R * R) * R / (3.0 * N);
  GPOptions opt;
  opt.hbar_over_mass = kHm;
  const auto r = gp_ground_state(V, g, N, opt);
  CHECK(norm_of(r.phi) == doctest::Approx(N).epsilon(1e-12));

  const auto tf = thomas_fermi_density(V, g, N);
  const double peak = *std::max_element(tf.density.begin(), tf.density.end());
  int checked = 0;
  for (std::size_t i = 0; i < grid.nx; ++i) {
    if (tf.density[i] <= 0.5 * peak) continue;
    ++checked;
    CHECK(std::abs(std::norm(r.phi.amplitude[i]) / tf.density[i] - 1.0) < 0.05);
  }
  CHECK(checked > 100);

  std::vector<Complex> tf_phi(grid.size());
  for (std::size_t i = 0; i < grid.nx; ++i) tf_phi[i] = std::sqrt(tf.density[i]);
  CHECK(r.energy <= gp_energy(tf_phi, V, g, kHm));

  for (std::size_t n = 1; n < r.energy_history.size(); ++n)
    CHECK(r.energy_history[n] <= r.energy_history[n - 1] * (1.0 + 1e-14));

  for (const auto& a : r.phi.amplitude) {
    CHECK(a.imag() == 0.0);
    CHECK(a.real() >= 0.0);
  }
}

TEST_CASE("non-convergence reports the residual") {
  const auto grid = Grid::line(256, 0.25e-6);
  const auto V = harmonic_potential(grid, kMw2);
  GPOptions opt;
  opt.hbar_over_mass = kHm;
  opt.max_steps = 3;
  opt.initial = std::vector<Complex>(grid.size(), 1.0);
  try {
    gp_ground_state(V, 1e-6, 100.0, opt);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("relative energy change") != std::string::npos);
  }
}

TEST_CASE("preconditions") {
  const auto grid = Grid::line(64, 1e-6);
  const auto V = harmonic_potential(grid, kMw2);
  GPOptions opt;
  CHECK_THROWS_AS(gp_ground_state(V, 1.0, 1.0, opt), PreconditionError);  // no mass
  opt.hbar_over_mass = kHm;
  CHECK_THROWS_AS(gp_ground_state(V, -1.0, 1.0, opt), PreconditionError);
  CHECK_THROWS_AS(gp_ground_state(V, 1.0, 0.0, opt), PreconditionError);
  opt.initial = std::vector<Complex>(3, 1.0);
  CHECK_THROWS_AS(gp_ground_state(V, 1.0, 1.0, opt), PreconditionError);
}

TEST_CASE("2D linear limit separates") {
  const auto grid = Grid::plane(64, 64, 1e-6, 1e-6);
  const auto V = harmonic_potential(grid, kMw2, 4.0 * kMw2);
  GPOptions opt;
  opt.hbar_over_mass = kHm;
  opt.dt = 1e-4;
  const auto r = gp_ground_state(V, 0.0, 1.0, opt);
  // omega_x/2 + omega_y/2 with omega_y = 2 omega_x
  CHECK(r.energy == doctest::Approx(1.5 * kOmega).epsilon(2e-3));
}
