#pragma once

#include <optional>
#include <vector>

#include "mwo/holo/grid.hpp"

namespace mwo::holo {

// Units: V and energies in rad/s (hbar = 1), g in rad/s * length^dim,
// hbar_over_mass in length^2/s.
struct GPOptions {
  double hbar_over_mass = 0.0;
  double dt = 0.0;  // imaginary-time step [s]; 0 picks 0.05 / (energy scale)
  int max_steps = 200000;  // attempted steps, rejected ones included
  double tolerance = 1e-10;  // relative energy change per step
  std::optional<std::vector<Complex>> initial;  // defaults to sqrt(TF) or the harmonic Gaussian
};

struct GPResult {
  ScalarField phi;  // real, nonnegative, integral |phi|^2 = N
  double energy = 0.0;
  std::vector<double> energy_history;  // after each step
  int steps = 0;    // accepted steps
  double dt = 0.0;  // final step; smaller than the initial one after rejections
};

// E = integral [ (hbar/M)/2 |grad phi|^2 + V |phi|^2 + g/2 |phi|^4 ], spectral gradient.
double gp_energy(const std::vector<Complex>& phi, const PotentialMap& V, double g, double hbar_over_mass);

GPResult gp_ground_state(const PotentialMap& V, double g, double N, const GPOptions& opt);

}  // namespace mwo::holo
