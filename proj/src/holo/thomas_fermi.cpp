#include "mwo/holo/thomas_fermi.hpp"

#include <algorithm>
#include <cmath>

#include "mwo/error.hpp"

namespace mwo::holo {

namespace {

double atoms(const PotentialMap& V, double g, double mu) {
  double s = 0.0;
  for (double v : V.values) s += std::max(mu - v, 0.0);
  return s / g * V.grid.cell_volume();
}

}  // namespace

double solve_chemical_potential(const PotentialMap& V, double g, double N) {
  V.validate();
  if (!(g > 0.0) || !std::isfinite(g)) throw PreconditionError("thomas-fermi: g must be positive");
  if (!(N > 0.0) || !std::isfinite(N)) throw PreconditionError("thomas-fermi: N must be positive");

  const double vmin = *std::min_element(V.values.begin(), V.values.end());
  double lo = vmin;
  double hi = vmin + g * N / V.grid.cell_volume();
  // hi already puts N atoms in the minimum cell alone, so it brackets; the
  // expansion only guards against rounding
  for (int k = 0; k < 60 && atoms(V, g, hi) < N; ++k) hi = vmin + 2.0 * (hi - vmin);
  if (atoms(V, g, hi) < N) throw NumericalError("thomas-fermi: could not bracket the chemical potential");

  const double tol = 1e-8 * N;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double n = atoms(V, g, mid);
    if (std::abs(n - N) <= tol) return mid;
    if (n < N)
      lo = mid;
    else
      hi = mid;
    if (mid == lo && mid == hi) break;
  }
  const double mid = 0.5 * (lo + hi);
  if (std::abs(atoms(V, g, mid) - N) <= tol) return mid;
  throw NumericalError("thomas-fermi: bisection stalled before reaching 1e-8 N");
}

TFProfile thomas_fermi_density(const PotentialMap& V, double g, double N) {
  const double mu = solve_chemical_potential(V, g, N);
  TFProfile p{V.grid, std::vector<double>(V.values.size()), mu, g, N};
  for (std::size_t i = 0; i < V.values.size(); ++i) p.density[i] = std::max(mu - V.values[i], 0.0) / g;
  return p;
}

double harmonic_mu_1d(double m_omega2, double g, double N) {
  if (!(m_omega2 > 0.0) || !(g > 0.0) || !(N > 0.0)) throw PreconditionError("harmonic_mu_1d: inputs must be positive");
  const double R = std::cbrt(1.5 * g * N / m_omega2);
  return 0.5 * m_omega2 * R * R;
}

PotentialMap harmonic_potential(const Grid& grid, double m_omega2_x, double m_omega2_y) {
  grid.validate();
  PotentialMap V{grid, std::vector<double>(grid.size())};
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double x = grid.x(i);
      const double y = grid.dim == 2 ? grid.y(j) : 0.0;
      V.values[grid.index(i, j)] = 0.5 * (m_omega2_x * x * x + m_omega2_y * y * y);
    }
  return V;
}

}  // namespace mwo::holo
