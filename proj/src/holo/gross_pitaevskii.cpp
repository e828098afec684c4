#include "mwo/holo/gross_pitaevskii.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mwo/error.hpp"
#include "mwo/holo/fft.hpp"
#include "mwo/holo/thomas_fermi.hpp"

namespace mwo::holo {

namespace {

// |k|^2 in FFT order
std::vector<double> k_squared(const Grid& grid) {
  const auto fx = fft_frequencies(grid.nx, grid.dx);
  const auto fy = grid.dim == 2 ? fft_frequencies(grid.ny, grid.dy) : std::vector<double>{0.0};
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> k2(grid.size());
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double kx = two_pi * fx[i], ky = two_pi * fy[j];
      k2[grid.index(i, j)] = kx * kx + ky * ky;
    }
  return k2;
}

double norm_of(const std::vector<Complex>& phi, const Grid& grid) {
  double s = 0.0;
  for (const auto& a : phi) s += std::norm(a);
  return s * grid.cell_volume();
}

// Curvature of V at its minimum, as a harmonic frequency; 0 if not confining.
double curvature_frequency(const PotentialMap& V, double hbar_over_mass) {
  const auto& g = V.grid;
  const auto imin = static_cast<std::size_t>(std::min_element(V.values.begin(), V.values.end()) - V.values.begin());
  const std::size_t i = imin % g.nx, j = imin / g.nx;
  double w = 0.0;
  auto axis = [&](std::size_t a, std::size_t b, double h) {
    const double c = (V.values[a] + V.values[b] - 2.0 * V.values[imin]) / (h * h);
    if (c > 0.0) w = std::max(w, std::sqrt(c * hbar_over_mass));
  };
  if (i > 0 && i + 1 < g.nx) axis(g.index(i - 1, j), g.index(i + 1, j), g.dx);
  if (g.dim == 2 && j > 0 && j + 1 < g.ny) axis(g.index(i, j - 1), g.index(i, j + 1), g.dy);
  return w;
}

}  // namespace

double gp_energy(const std::vector<Complex>& phi, const PotentialMap& V, double g, double hbar_over_mass) {
  const Grid& grid = V.grid;
  if (phi.size() != grid.size()) throw PreconditionError("gp: sample count does not match the grid");
  const auto k2 = k_squared(grid);
  auto spec = phi;
  fft_forward(spec, grid);
  double kin = 0.0;
  for (std::size_t n = 0; n < spec.size(); ++n) kin += k2[n] * std::norm(spec[n]);
  // Parseval: sum |phi|^2 = sum |phi_hat|^2 / n
  kin *= 0.5 * hbar_over_mass / static_cast<double>(grid.size());
  double pot = 0.0, inter = 0.0;
  for (std::size_t n = 0; n < phi.size(); ++n) {
    const double rho = std::norm(phi[n]);
    pot += V.values[n] * rho;
    inter += 0.5 * g * rho * rho;
  }
  return (kin + pot + inter) * grid.cell_volume();
}

GPResult gp_ground_state(const PotentialMap& V, double g, double N, const GPOptions& opt) {
  V.validate();
  const Grid& grid = V.grid;
  if (!(g >= 0.0) || !std::isfinite(g)) throw PreconditionError("gp: g must be >= 0");
  if (!(N > 0.0) || !std::isfinite(N)) throw PreconditionError("gp: N must be positive");
  if (!(opt.hbar_over_mass > 0.0)) throw PreconditionError("gp: hbar_over_mass must be positive");
  if (opt.dt < 0.0 || !std::isfinite(opt.dt)) throw PreconditionError("gp: dt must be >= 0");
  if (opt.max_steps < 1) throw PreconditionError("gp: max_steps must be positive");
  if (!(opt.tolerance > 0.0)) throw PreconditionError("gp: tolerance must be positive");

  const double vmin = *std::min_element(V.values.begin(), V.values.end());
  const double omega = curvature_frequency(V, opt.hbar_over_mass);
  double scale = omega > 0.0 ? 0.5 * omega : 0.5 * opt.hbar_over_mass * std::pow(std::numbers::pi / grid.length_x(), 2);

  std::vector<Complex> phi(grid.size());
  if (opt.initial) {
    if (opt.initial->size() != grid.size()) throw PreconditionError("gp: initial guess does not match the grid");
    phi = *opt.initial;
  } else if (g > 0.0) {
    const auto tf = thomas_fermi_density(V, g, N);
    scale = std::max(scale, tf.mu - vmin);
    for (std::size_t n = 0; n < phi.size(); ++n) phi[n] = std::sqrt(tf.density[n]);
  } else {
    for (std::size_t n = 0; n < phi.size(); ++n) phi[n] = std::exp(-(V.values[n] - vmin) / (2.0 * scale));
  }
  if (g > 0.0 && opt.initial) scale = std::max(scale, thomas_fermi_density(V, g, N).mu - vmin);
  const double dt = opt.dt > 0.0 ? opt.dt : 0.05 / scale;

  auto renormalize = [&] {
    const double s = norm_of(phi, grid);
    if (!(s > 0.0) || !std::isfinite(s)) throw NumericalError("gp: wavefunction vanished or diverged");
    const double f = std::sqrt(N / s);
    for (auto& a : phi) a *= f;
  };
  renormalize();

  const auto k2 = k_squared(grid);
  std::vector<double> kin(grid.size());
  double step_dt = 0.0;
  auto set_dt = [&](double h) {
    step_dt = h;
    for (std::size_t n = 0; n < kin.size(); ++n) kin[n] = std::exp(-h * 0.5 * opt.hbar_over_mass * k2[n]);
  };
  set_dt(dt);
  auto half_potential = [&] {
    for (std::size_t n = 0; n < phi.size(); ++n)
      phi[n] *= std::exp(-0.5 * step_dt * (V.values[n] - vmin + g * std::norm(phi[n])));
  };

  // The split-step fixed point sits O(dt^2) above the true minimum, so near
  // convergence a fixed dt can climb back up. A step that raises the energy
  // beyond roundoff is rejected and dt halved, which keeps the descent
  // monotone and shrinks the splitting bias on the way in.
  constexpr double kRoundoff = 1e-14;
  GPResult out;
  double e_prev = gp_energy(phi, V, g, opt.hbar_over_mass);
  double residual = 0.0;
  int accepted = 0;
  std::vector<Complex> saved;
  for (int attempt = 1; attempt <= opt.max_steps; ++attempt) {
    saved = phi;
    half_potential();
    fft_forward(phi, grid);
    for (std::size_t n = 0; n < phi.size(); ++n) phi[n] *= kin[n];
    fft_inverse(phi, grid);
    half_potential();
    renormalize();
    const double e = gp_energy(phi, V, g, opt.hbar_over_mass);
    if (e - e_prev > kRoundoff * std::abs(e_prev)) {
      phi.swap(saved);
      if (step_dt < dt * 1e-6) throw NumericalError("gp: step size collapsed while the energy kept rising");
      set_dt(0.5 * step_dt);
      continue;
    }
    ++accepted;
    out.energy_history.push_back(e);
    residual = std::abs(e - e_prev) / std::max(std::abs(e), 1e-300);
    e_prev = e;
    if (residual < opt.tolerance) {
      // ground state of a real Hamiltonian is real and nodeless up to a global phase
      for (auto& a : phi) a = std::abs(a);
      out.phi = ScalarField{grid, std::move(phi), 0.0, {}};
      out.energy = e;
      out.steps = accepted;
      out.dt = step_dt;
      return out;
    }
  }
  std::ostringstream msg;
  msg << "gp: no convergence after " << opt.max_steps << " steps (last relative energy change " << residual
      << ", tolerance " << opt.tolerance << ")";
  throw NumericalError(msg.str());
}

}  // namespace mwo::holo
