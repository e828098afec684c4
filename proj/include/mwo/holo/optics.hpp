#pragma once

#include "mwo/holo/grid.hpp"

namespace mwo::holo {

inline constexpr double kHbar = 1.054571817e-34;          // J s
inline constexpr double kSodiumMass = 22.98976928 * 1.66053906660e-27;  // kg

// lambda = 2 pi hbar / (M v)
double de_broglie_wavelength(double mass, double velocity, double hbar = kHbar);

struct PropagationOptions {
  // Largest fraction of the propagating power allowed above the band limit
  // 1 / (lambda sqrt(1 + (2d/L)^2)), beyond which the kernel phase is
  // undersampled and the periodic box wraps light around.
  double aliasing_tolerance = 1e-4;
};

// Angular spectrum with kernel exp(i d sqrt(k^2 - k_perp^2)); evanescent
// components decay as exp(-|d| kappa). Throws when the band-limit check
// fails, naming the padded sample count that would satisfy it.
ScalarField propagate(const ScalarField& field, double distance, const PropagationOptions& opt = {});

// Smallest power-of-two samples per axis (>= current) that passes the check.
std::size_t required_samples(const ScalarField& field, double distance, const PropagationOptions& opt = {});

// Centred zero padding to n samples per axis, and the inverse crop.
ScalarField pad_field(const ScalarField& field, std::size_t n);
ScalarField crop_field(const ScalarField& field, const Grid& grid);

// Samples per axis after padding until the padded field passes the check
// at every distance in `distances`.
std::size_t padded_samples(const ScalarField& field, const std::vector<double>& distances,
                           const PropagationOptions& opt = {});

// Zero-pads to required_samples, propagates and crops back to the input grid.
ScalarField propagate_padded(const ScalarField& field, double distance, const PropagationOptions& opt = {});

// Field builders, 1D or 2D (y profile flat for the 1D-shaped ones).
ScalarField plane_wave(const Grid& grid, double wavelength, double angle = 0.0, double amplitude = 1.0);
// exp(-((x-x0)^2) / w0^2) times a tilt exp(i k sin(angle) x)
ScalarField gaussian_beam(const Grid& grid, double wavelength, double waist, double x0 = 0.0, double angle = 0.0);
ScalarField rect_aperture(const Grid& grid, double wavelength, double width, double x0 = 0.0, double amplitude = 1.0);

struct ImprintModel {
  double eta = 0.0;        // phase per column density
  double incidence = 0.0;  // beta, radians from the hologram normal
  double thickness = 0.0;  // condensate extent along the beam, for the thin-hologram check

  void validate() const;
};

struct ImprintDiagnostics {
  double max_phase = 0.0;          // |eta * max column density|
  double feature_frequency = 0.0;  // highest frequency imprinting >= 0.01 rad
  double raman_nath_q = 0.0;       // 2 pi lambda D f^2
  bool raman_nath = true;          // q < 1
};

std::vector<double> column_density(const TFProfile& profile, const ImprintModel& model);
ImprintDiagnostics imprint_diagnostics(const TFProfile& profile, const ImprintModel& model, double wavelength);

// field * exp(i eta rho_col); a warning is attached when the thin-hologram
// check fails.
ScalarField phase_imprint(const ScalarField& field, const TFProfile& profile, const ImprintModel& model);

}  // namespace mwo::holo
