#pragma once

#include "mwo/holo/grid.hpp"

namespace mwo::holo {

// mu such that sum max(mu - V, 0)/g * dV = N within 1e-8 N.
double solve_chemical_potential(const PotentialMap& V, double g, double N);

TFProfile thomas_fermi_density(const PotentialMap& V, double g, double N);

// 1D harmonic closed form, V = 0.5 * m_omega2 * x^2 with m_omega2 = M omega^2
// (hbar = 1 units). From N = (2/3) m_omega2 R^3 / g and mu = m_omega2 R^2 / 2.
double harmonic_mu_1d(double m_omega2, double g, double N);

PotentialMap harmonic_potential(const Grid& grid, double m_omega2_x, double m_omega2_y = 0.0);

}  // namespace mwo::holo
