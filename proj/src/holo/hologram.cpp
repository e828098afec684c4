#include "mwo/holo/hologram.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <exception>
#include <limits>
#include <thread>

#include "mwo/error.hpp"
#include "mwo/holo/fft.hpp"
#include "mwo/holo/thomas_fermi.hpp"

namespace mwo::holo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t wrap(long long i, std::size_t n) {
  const auto m = static_cast<long long>(n);
  return static_cast<std::size_t>(((i % m) + m) % m);
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  // a flat window carries no image; relative guard against roundoff noise
  if (saa <= 1e-24 * n * std::max(ma * ma, 1e-300) || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

int support_components(const TFProfile& p) {
  const Grid& g = p.grid;
  std::vector<int> label(g.size(), -1);
  int count = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (p.density[s] <= 0.0 || label[s] >= 0) continue;
    label[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      const std::size_t i = c % g.nx, j = c / g.nx;
      auto visit = [&](std::size_t ii, std::size_t jj) {
        const std::size_t k = g.index(ii, jj);
        if (p.density[k] > 0.0 && label[k] < 0) {
          label[k] = count;
          stack.push_back(k);
        }
      };
      // no wrap-around: the box edge is not a physical neighbour
      if (i > 0) visit(i - 1, j);
      if (i + 1 < g.nx) visit(i + 1, j);
      if (g.dim == 2 && j > 0) visit(i, j - 1);
      if (g.dim == 2 && j + 1 < g.ny) visit(i, j + 1);
    }
    ++count;
  }
  return count;
}

Hologram compose_hologram(const ScalarField& object, const ScalarField& reference, const PotentialMap& trap,
                          double writing_strength, double g, double N) {
  object.validate();
  reference.validate();
  trap.validate();
  require_same_grid(object.grid, reference.grid, "compose_hologram");
  require_same_grid(object.grid, trap.grid, "compose_hologram");
  if (!(writing_strength >= 0.0) || !std::isfinite(writing_strength))
    throw PreconditionError("compose_hologram: writing strength must be >= 0");

  PotentialMap total = trap;
  for (std::size_t n = 0; n < total.values.size(); ++n)
    total.values[n] += writing_strength * std::norm(object.amplitude[n] + reference.amplitude[n]);

  Hologram h;
  h.profile = thomas_fermi_density(total, g, N);
  const auto bare = thomas_fermi_density(trap, g, N);
  std::size_t core = 0, clipped = 0;
  for (std::size_t n = 0; n < bare.density.size(); ++n) {
    if (bare.density[n] <= 0.0) continue;
    ++core;
    if (h.profile.density[n] <= 0.0) ++clipped;
  }
  h.clipping_fraction = core ? static_cast<double>(clipped) / static_cast<double>(core) : 0.0;
  const int pieces = support_components(h.profile);
  h.fragmented = pieces > 1;
  if (h.fragmented) {
    std::ostringstream msg;
    msg << "condensate fragmented into " << pieces << " pieces; writing strength too large";
    h.warnings.push_back(msg.str());
  }
  return h;
}

ReconstructionTarget make_target(const ScalarField& object_plane, double x0, double width, double conjugate_carrier) {
  object_plane.validate();
  if (object_plane.grid.dim != 1) throw PreconditionError("reconstruct: only line holograms are supported");
  if (!(width > 0.0)) throw PreconditionError("reconstruct: object width must be positive");
  const Grid& g = object_plane.grid;
  ReconstructionTarget t;
  t.object_x0 = x0;
  t.object_width = width;
  t.carrier_frequency = conjugate_carrier;
  t.shift_range = 0.5 * width;
  const auto half = static_cast<long long>(std::llround(width / g.dx));
  const auto c = static_cast<long long>(std::llround(x0 / g.dx)) + static_cast<long long>(g.nx / 2);
  for (long long k = -half; k <= half; ++k) t.template_intensity.push_back(std::norm(object_plane.amplitude[wrap(c + k, g.nx)]));
  return t;
}

double order_center(double x0, double z, double wavelength, double incidence, double frequency) {
  const double s = std::sin(incidence) + wavelength * frequency;
  if (std::abs(s) >= 1.0) return std::numeric_limits<double>::quiet_NaN();
  return x0 + z * s / std::sqrt(1.0 - s * s);
}

double window_score(const ScalarField& image, const ReconstructionTarget& t, double center, double* where) {
  const Grid& g = image.grid;
  const auto& tpl = t.template_intensity;
  if (where) *where = center;
  if (!std::isfinite(center)) return 0.0;
  const auto half = static_cast<long long>(tpl.size() / 2);
  const auto c0 = static_cast<long long>(std::llround(center / g.dx)) + static_cast<long long>(g.nx / 2);
  const auto reach = static_cast<long long>(std::llround(t.shift_range / g.dx));
  std::vector<double> win(tpl.size());
  double best = -1.0;
  for (long long m = -reach; m <= reach; ++m) {
    for (std::size_t k = 0; k < tpl.size(); ++k)
      win[k] = std::norm(image.amplitude[wrap(c0 + m + static_cast<long long>(k) - half, g.nx)]);
    const double r = pearson(win, tpl);
    // strict > keeps the first (leftmost) shift on ties
    if (r > best) {
      best = r;
      if (where) *where = g.x(wrap(c0 + m, g.nx));
    }
  }
  return std::clamp(best, 0.0, 1.0);
}

Reconstruction reconstruct(const TFProfile& hologram, const ImprintModel& model, const ScalarField& reading,
                           const ReconstructionTarget& target, const SearchRange& range,
                           const ReconstructOptions& opt) {
  reading.validate();
  model.validate();
  if (reading.grid.dim != 1) throw PreconditionError("reconstruct: only line holograms are supported");
  if (!(reading.wavelength > 0.0)) throw PreconditionError("reconstruct: reading beam has no wavelength");
  if (!std::isfinite(range.lo) || !std::isfinite(range.hi) || !(range.hi > range.lo) || range.steps < 2)
    throw PreconditionError("reconstruct: empty search range");
  if (range.refinements < 0) throw PreconditionError("reconstruct: refinements must be >= 0");
  if (target.template_intensity.size() < 3) throw PreconditionError("reconstruct: object template too short");
  {
    const auto [lo, hi] = std::minmax_element(target.template_intensity.begin(), target.template_intensity.end());
    if (*hi - *lo <= 0.0) throw PreconditionError("reconstruct: degenerate object (zero-variance intensity)");
  }
  if (opt.threads < 1) throw PreconditionError("reconstruct: threads must be positive");

  const auto on_grid = phase_imprint(reading, hologram, model);
  // far planes need a wider box so higher orders do not wrap around; the
  // band limit only tightens with |d|, so the range ends decide the padding
  const std::size_t n = padded_samples(on_grid, {range.lo, range.hi}, opt.propagation);
  const auto imprinted = n > on_grid.grid.nx ? pad_field(on_grid, n) : on_grid;

  auto spectrum = imprinted.amplitude;
  fft_forward(spectrum, imprinted.grid);
  const Grid& g = imprinted.grid;
  const auto fx = fft_frequencies(g.nx, g.dx);
  const double k = kTwoPi / imprinted.wavelength;

  auto image_at = [&](double d) {
    ScalarField f{g, spectrum, imprinted.wavelength, imprinted.warnings};
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double q = k * k - kTwoPi * kTwoPi * fx[i] * fx[i];
      f.amplitude[i] *= q >= 0.0 ? std::polar(1.0, d * std::sqrt(q)) : Complex(std::exp(-std::abs(d) * std::sqrt(-q)));
    }
    fft_inverse(f.amplitude, g);
    return f;
  };
  auto score_at = [&](double d) {
    const auto img = image_at(d);
    return window_score(img, target,
                        order_center(target.object_x0, d, imprinted.wavelength, model.incidence, target.carrier_frequency));
  };

  std::vector<std::pair<double, double>> scan;
  auto evaluate = [&](const std::vector<double>& ds) {
    std::vector<double> scores(ds.size());
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(opt.threads), ds.size());
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t n = w; n < ds.size(); n += workers) scores[n] = score_at(ds[n]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (std::size_t n = 0; n < ds.size(); ++n) scan.emplace_back(ds[n], scores[n]);
  };
  auto best_of = [&] {
    // max score, ties to the smaller distance
    auto best = scan.front();
    for (const auto& p : scan)
      if (p.second > best.second || (p.second == best.second && p.first < best.first)) best = p;
    return best;
  };

  double step = (range.hi - range.lo) / (range.steps - 1);
  std::vector<double> ds;
  for (int n = 0; n < range.steps; ++n) ds.push_back(range.lo + step * n);
  evaluate(ds);
  for (int r = 0; r < range.refinements; ++r) {
    const double c = best_of().first;
    const double lo = std::max(range.lo, c - step), hi = std::min(range.hi, c + step);
    step = (hi - lo) / 20.0;
    ds.clear();
    for (int n = 0; n <= 20; ++n) ds.push_back(lo + step * n);
    evaluate(ds);
  }
  std::sort(scan.begin(), scan.end());
  scan.erase(std::unique(scan.begin(), scan.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
             scan.end());

  Reconstruction out;
  const auto best = best_of();
  out.best_distance = best.first;
  const auto full = image_at(best.first);
  out.score = window_score(full, target,
                           order_center(target.object_x0, best.first, imprinted.wavelength, model.incidence,
                                        target.carrier_frequency),
                           &out.conjugate_center);
  out.scan = std::move(scan);
  out.image = n > on_grid.grid.nx ? crop_field(full, on_grid.grid) : full;

  // real order: opposite carrier; its image is still defocused here, so take a centroid
  const double xr = order_center(target.object_x0, best.first, imprinted.wavelength, model.incidence,
                                 -target.carrier_frequency);
  double total = 0.0, win = 0.0, moment = 0.0;
  for (std::size_t i = 0; i < g.nx; ++i) {
    const double p = std::norm(full.amplitude[i]);
    total += p;
    if (std::isfinite(xr) && std::abs(g.x(i) - xr) <= 2.0 * target.object_width) {
      win += p;
      moment += p * g.x(i);
    }
  }
  out.real_center = win > 0.0 ? moment / win : std::numeric_limits<double>::quiet_NaN();
  out.real_fraction = total > 0.0 ? win / total : 0.0;
  return out;
}

void RectHologramScenario::validate() const {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) throw PreconditionError(std::string("holo: ") + key + " must be positive");
  };
  Grid::line(samples, spacing);
  positive(reading_mass, "reading_mass");
  positive(reading_velocity, "reading_velocity");
  positive(reading_waist, "reading_waist");
  positive(writing_wavelength, "writing_wavelength");
  positive(object_width, "object_width");
  positive(object_distance, "object_distance");
  positive(trap_frequency, "trap_frequency");
  positive(tf_radius, "tf_radius");
  positive(atom_number, "atom_number");
  if (!(writing_fraction >= 0.0) || !std::isfinite(writing_fraction))
    throw PreconditionError("holo: writing_fraction must be >= 0");
  if (!std::isfinite(eta_scale)) throw PreconditionError("holo: eta_scale must be finite");
  if (!std::isfinite(reference_frequency)) throw PreconditionError("holo: reference_frequency must be finite");
  if (!(thickness >= 0.0)) throw PreconditionError("holo: thickness must be >= 0");
  ImprintModel{0.0, incidence, thickness}.validate();
  if (2.0 * tf_radius >= static_cast<double>(samples) * spacing)
    throw PreconditionError("holo: tf_radius does not fit in the grid");
  if (!(search.hi > search.lo) || search.steps < 2) throw PreconditionError("holo: empty search range");
}

RectHologramResult run_rect_hologram(const RectHologramScenario& s, int threads) {
  s.validate();
  RectHologramResult r;
  const Grid grid = Grid::line(s.samples, s.spacing);
  r.lambda_db = de_broglie_wavelength(s.reading_mass, s.reading_velocity);

  // bare trap: mu = M w^2 R^2 / 2 and N = 4 mu R / (3 g), all in rad/s (hbar = 1)
  const double m_omega2 = s.reading_mass / kHbar * s.trap_frequency * s.trap_frequency;
  r.mu_trap = 0.5 * m_omega2 * s.tf_radius * s.tf_radius;
  r.g = 4.0 * r.mu_trap * s.tf_radius / (3.0 * s.atom_number);
  r.writing_strength = s.writing_fraction * r.mu_trap;
  r.model.eta = r.writing_strength > 0.0 ? s.eta_scale * r.g / r.writing_strength : 0.0;
  r.model.incidence = s.incidence;
  r.model.thickness = s.thickness;

  r.object_plane = rect_aperture(grid, s.writing_wavelength, s.object_width);
  r.object_at_condensate = propagate_padded(r.object_plane, s.object_distance);
  const auto reference = plane_wave(grid, s.writing_wavelength, std::asin(-s.reference_frequency * s.writing_wavelength));
  const auto trap = harmonic_potential(grid, m_omega2);
  r.hologram = compose_hologram(r.object_at_condensate, reference, trap, r.writing_strength, r.g, s.atom_number);
  r.warnings = r.hologram.warnings;

  const auto reading = gaussian_beam(grid, r.lambda_db, s.reading_waist, 0.0, s.incidence);
  r.diagnostics = imprint_diagnostics(r.hologram.profile, r.model, r.lambda_db);
  if (!r.diagnostics.raman_nath) {
    std::ostringstream msg;
    msg << "thin-hologram check failed: Q = " << r.diagnostics.raman_nath_q << " >= 1";
    r.warnings.push_back(msg.str());
  }
  // the conjugate term O* R carries the reference frequency -f
  r.target = make_target(r.object_plane, 0.0, s.object_width, -s.reference_frequency);
  r.reconstruction = reconstruct(r.hologram.profile, r.model, reading, r.target, s.search, ReconstructOptions{{}, threads});
  return r;
}

}  // namespace mwo::holo
