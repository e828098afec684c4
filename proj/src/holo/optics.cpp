#include "mwo/holo/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mwo/error.hpp"
#include "mwo/holo/fft.hpp"

namespace mwo::holo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSignificantPhase = 0.01;

double band_limit(double wavelength, double distance, double length) {
  const double r = 2.0 * distance / length;
  return 1.0 / (wavelength * std::sqrt(1.0 + r * r));
}

// Propagating power by |f| on one axis, as (frequency, power) sorted descending.
struct AxisSpectrum {
  std::vector<std::pair<double, double>> bins;
  double total = 0.0;
};

AxisSpectrum axis_spectrum(const std::vector<Complex>& spec, const Grid& grid, double wavelength, bool along_x) {
  const auto fx = fft_frequencies(grid.nx, grid.dx);
  const auto fy = grid.dim == 2 ? fft_frequencies(grid.ny, grid.dy) : std::vector<double>{0.0};
  const std::size_t n = along_x ? grid.nx : grid.ny;
  std::vector<double> p(n, 0.0);
  AxisSpectrum out;
  const double inv_l2 = 1.0 / (wavelength * wavelength);
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i) {
      if (fx[i] * fx[i] + fy[j] * fy[j] >= inv_l2) continue;  // evanescent, attenuated instead
      const double w = std::norm(spec[grid.index(i, j)]);
      p[along_x ? i : j] += w;
      out.total += w;
    }
  const auto& f = along_x ? fx : fy;
  for (std::size_t k = 0; k < n; ++k) out.bins.emplace_back(std::abs(f[k]), p[k]);
  std::sort(out.bins.begin(), out.bins.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  return out;
}

// Fraction of propagating power above f_lim, and the frequency below which
// all but `tol` of it lies.
std::pair<double, double> axis_excess(const AxisSpectrum& s, double f_lim, double tol) {
  if (s.total <= 0.0) return {0.0, 0.0};
  double above = 0.0;
  for (const auto& [f, p] : s.bins)
    if (f > f_lim) above += p;
  double cum = 0.0, f_need = 0.0;
  for (const auto& [f, p] : s.bins) {
    if (cum + p > tol * s.total) {
      f_need = f;
      break;
    }
    cum += p;
  }
  return {above / s.total, f_need};
}

std::size_t samples_for(double f_need, double wavelength, double distance, double spacing, std::size_t current) {
  const double s = wavelength * f_need;
  if (s >= 1.0) return 0;  // content at grazing incidence; no padding helps
  const double length = 2.0 * std::abs(distance) * s / std::sqrt(1.0 - s * s);
  // called only when the check failed, so at least one doubling is needed
  std::size_t n = 2 * current;
  while (static_cast<double>(n) * spacing < length) {
    if (n > (std::size_t{1} << 40)) return 0;
    n *= 2;
  }
  return n;
}

struct Check {
  bool ok = true;
  double worst_fraction = 0.0;
  std::size_t nx = 0, ny = 0;
};

Check check_aliasing(const std::vector<Complex>& spec, const Grid& grid, double wavelength, double distance,
                     double tol) {
  Check c{true, 0.0, grid.nx, grid.ny};
  if (distance == 0.0) return c;
  for (int axis = 0; axis < grid.dim; ++axis) {
    const bool ax = axis == 0;
    const auto s = axis_spectrum(spec, grid, wavelength, ax);
    const double len = ax ? grid.length_x() : grid.length_y();
    const auto [frac, f_need] = axis_excess(s, band_limit(wavelength, distance, len), tol);
    c.worst_fraction = std::max(c.worst_fraction, frac);
    if (frac > tol) {
      c.ok = false;
      const std::size_t n = samples_for(f_need, wavelength, distance, ax ? grid.dx : grid.dy, ax ? grid.nx : grid.ny);
      (ax ? c.nx : c.ny) = n;
    }
  }
  return c;
}

void apply_kernel(std::vector<Complex>& spec, const Grid& grid, double wavelength, double distance) {
  const auto fx = fft_frequencies(grid.nx, grid.dx);
  const auto fy = grid.dim == 2 ? fft_frequencies(grid.ny, grid.dy) : std::vector<double>{0.0};
  const double k = kTwoPi / wavelength;
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double kp2 = kTwoPi * kTwoPi * (fx[i] * fx[i] + fy[j] * fy[j]);
      const double q = k * k - kp2;
      auto& v = spec[grid.index(i, j)];
      if (q >= 0.0)
        v *= std::polar(1.0, distance * std::sqrt(q));
      else
        v *= std::exp(-std::abs(distance) * std::sqrt(-q));
    }
}

void check_field(const ScalarField& f) {
  f.validate();
  if (!(f.wavelength > 0.0)) throw PreconditionError("propagate: field has no wavelength");
}

}  // namespace

double de_broglie_wavelength(double mass, double velocity, double hbar) {
  if (!(mass > 0.0) || !(velocity > 0.0) || !(hbar > 0.0))
    throw PreconditionError("de Broglie wavelength: mass, velocity and hbar must be positive");
  return kTwoPi * hbar / (mass * velocity);
}

ScalarField propagate(const ScalarField& field, double distance, const PropagationOptions& opt) {
  check_field(field);
  if (!std::isfinite(distance)) throw PreconditionError("propagate: distance must be finite");
  if (distance == 0.0) return field;
  ScalarField out = field;
  fft_forward(out.amplitude, out.grid);
  const auto c = check_aliasing(out.amplitude, out.grid, out.wavelength, distance, opt.aliasing_tolerance);
  if (!c.ok) {
    std::ostringstream msg;
    msg << "propagate: aliasing bound violated at distance " << distance << " m (" << c.worst_fraction
        << " of the propagating power above the band limit); ";
    if (c.nx == 0 || c.ny == 0)
      msg << "content near grazing incidence, no padding suffices";
    else
      msg << "pad the grid to " << c.nx << (field.grid.dim == 2 ? " x " + std::to_string(c.ny) : std::string())
          << " samples";
    throw PreconditionError(msg.str());
  }
  apply_kernel(out.amplitude, out.grid, out.wavelength, distance);
  fft_inverse(out.amplitude, out.grid);
  return out;
}

std::size_t required_samples(const ScalarField& field, double distance, const PropagationOptions& opt) {
  check_field(field);
  auto spec = field.amplitude;
  fft_forward(spec, field.grid);
  const auto c = check_aliasing(spec, field.grid, field.wavelength, distance, opt.aliasing_tolerance);
  if (c.ok) return field.grid.nx;
  if (c.nx == 0 || c.ny == 0) throw PreconditionError("propagate: content near grazing incidence, no padding suffices");
  return std::max(c.nx, c.ny);
}

ScalarField pad_field(const ScalarField& field, std::size_t n) {
  const Grid& g = field.grid;
  const std::size_t nx = std::max(n, g.nx);
  const std::size_t ny = g.dim == 2 ? std::max(n, g.ny) : 1;
  const Grid big = g.dim == 1 ? Grid::line(nx, g.dx) : Grid::plane(nx, ny, g.dx, g.dy);
  ScalarField out{big, std::vector<Complex>(big.size()), field.wavelength, field.warnings};
  const std::size_t ox = nx / 2 - g.nx / 2, oy = g.dim == 2 ? ny / 2 - g.ny / 2 : 0;
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) out.amplitude[big.index(i + ox, j + oy)] = field.amplitude[g.index(i, j)];
  return out;
}

ScalarField crop_field(const ScalarField& field, const Grid& g) {
  const Grid& big = field.grid;
  if (big.dim != g.dim || big.nx < g.nx || big.ny < g.ny || big.dx != g.dx || big.dy != g.dy)
    throw PreconditionError("crop: target grid is not a centred sub-grid");
  ScalarField out{g, std::vector<Complex>(g.size()), field.wavelength, field.warnings};
  const std::size_t ox = big.nx / 2 - g.nx / 2, oy = g.dim == 2 ? big.ny / 2 - g.ny / 2 : 0;
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) out.amplitude[g.index(i, j)] = field.amplitude[big.index(i + ox, j + oy)];
  return out;
}

std::size_t padded_samples(const ScalarField& field, const std::vector<double>& distances, const PropagationOptions& opt) {
  check_field(field);
  std::size_t n = std::max(field.grid.nx, field.grid.ny);
  // the band limit of a bigger box admits content the small one cut off, so
  // re-check on the padded field until it settles
  for (int round = 0; round < 16; ++round) {
    const auto padded = n > std::max(field.grid.nx, field.grid.ny) ? pad_field(field, n) : field;
    std::size_t need = n;
    for (double d : distances) need = std::max(need, required_samples(padded, d, opt));
    if (need == n) return n;
    n = need;
  }
  throw PreconditionError("propagate: padding did not converge");
}

ScalarField propagate_padded(const ScalarField& field, double distance, const PropagationOptions& opt) {
  const std::size_t n = padded_samples(field, {distance}, opt);
  if (n == std::max(field.grid.nx, field.grid.ny)) return propagate(field, distance, opt);
  return crop_field(propagate(pad_field(field, n), distance, opt), field.grid);
}

ScalarField plane_wave(const Grid& grid, double wavelength, double angle, double amplitude) {
  grid.validate();
  ScalarField f{grid, std::vector<Complex>(grid.size()), wavelength, {}};
  const double kx = kTwoPi / wavelength * std::sin(angle);
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i) f.amplitude[grid.index(i, j)] = std::polar(amplitude, kx * grid.x(i));
  f.validate();
  return f;
}

ScalarField gaussian_beam(const Grid& grid, double wavelength, double waist, double x0, double angle) {
  if (!(waist > 0.0)) throw PreconditionError("gaussian beam: waist must be positive");
  auto f = plane_wave(grid, wavelength, angle);
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double u = (grid.x(i) - x0) / waist;
      double r2 = u * u;
      if (grid.dim == 2) r2 += std::pow(grid.y(j) / waist, 2);
      f.amplitude[grid.index(i, j)] *= std::exp(-r2);
    }
  return f;
}

ScalarField rect_aperture(const Grid& grid, double wavelength, double width, double x0, double amplitude) {
  if (!(width > 0.0)) throw PreconditionError("rect aperture: width must be positive");
  auto f = plane_wave(grid, wavelength, 0.0, 0.0);
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i)
      if (std::abs(grid.x(i) - x0) <= 0.5 * width) f.amplitude[grid.index(i, j)] = amplitude;
  return f;
}

void ImprintModel::validate() const {
  if (!std::isfinite(eta)) throw PreconditionError("imprint: eta must be finite");
  if (!(std::abs(incidence) < 0.5 * std::numbers::pi)) throw PreconditionError("imprint: incidence must lie in (-pi/2, pi/2)");
  if (!(thickness >= 0.0) || !std::isfinite(thickness)) throw PreconditionError("imprint: thickness must be >= 0");
}

std::vector<double> column_density(const TFProfile& profile, const ImprintModel& model) {
  model.validate();
  // a tilted beam crosses the layer along a path longer by 1/cos(beta)
  const double stretch = 1.0 / std::cos(model.incidence);
  std::vector<double> c(profile.density.size());
  for (std::size_t n = 0; n < c.size(); ++n) c[n] = profile.density[n] * stretch;
  return c;
}

ImprintDiagnostics imprint_diagnostics(const TFProfile& profile, const ImprintModel& model, double wavelength) {
  const auto col = column_density(profile, model);
  ImprintDiagnostics d;
  double mean = 0.0;
  for (double c : col) {
    d.max_phase = std::max(d.max_phase, std::abs(model.eta * c));
    mean += c;
  }
  mean /= static_cast<double>(col.size());

  std::vector<Complex> mod(col.size());
  for (std::size_t n = 0; n < col.size(); ++n) mod[n] = model.eta * (col[n] - mean);
  fft_forward(mod, profile.grid);
  const auto fx = fft_frequencies(profile.grid.nx, profile.grid.dx);
  const auto fy = profile.grid.dim == 2 ? fft_frequencies(profile.grid.ny, profile.grid.dy) : std::vector<double>{0.0};
  // a Fourier component of phase amplitude p diffracts ~p^2/4 of the beam;
  // below 0.01 rad it is irrelevant for the thin-hologram question
  const double scale = 2.0 / static_cast<double>(profile.grid.size());
  for (std::size_t j = 0; j < profile.grid.ny; ++j)
    for (std::size_t i = 0; i < profile.grid.nx; ++i)
      if (std::abs(mod[profile.grid.index(i, j)]) * scale >= kSignificantPhase)
        d.feature_frequency = std::max(d.feature_frequency, std::hypot(fx[i], fy[j]));
  d.raman_nath_q = kTwoPi * wavelength * model.thickness * d.feature_frequency * d.feature_frequency;
  d.raman_nath = d.raman_nath_q < 1.0;
  return d;
}

ScalarField phase_imprint(const ScalarField& field, const TFProfile& profile, const ImprintModel& model) {
  field.validate();
  require_same_grid(field.grid, profile.grid, "phase_imprint");
  if (profile.density.size() != profile.grid.size()) throw PreconditionError("phase_imprint: profile size mismatch");
  const auto col = column_density(profile, model);
  ScalarField out = field;
  for (std::size_t n = 0; n < col.size(); ++n) out.amplitude[n] *= std::polar(1.0, model.eta * col[n]);
  if (model.thickness > 0.0 && field.wavelength > 0.0) {
    const auto d = imprint_diagnostics(profile, model, field.wavelength);
    if (!d.raman_nath) {
      std::ostringstream msg;
      msg << "thin-hologram check failed: Q = " << d.raman_nath_q << " >= 1";
      out.warnings.push_back(msg.str());
    }
  }
  return out;
}

}  // namespace mwo::holo
