#pragma once

#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "mwo/holo/grid.hpp"
#include "mwo/holo/optics.hpp"

namespace mwo::holo {

struct Hologram {
  TFProfile profile;
  double clipping_fraction = 0.0;  // trap-core points emptied by the writing light
  bool fragmented = false;         // density support split into several pieces
  std::vector<std::string> warnings;
};

// V_total = trap + writing_strength * |object + reference|^2, then Thomas-Fermi.
Hologram compose_hologram(const ScalarField& object, const ScalarField& reference, const PotentialMap& trap,
                          double writing_strength, double g, double N);

// Number of connected pieces of the support rho > 0 (4-neighbour in 2D).
int support_components(const TFProfile& profile);

struct SearchRange {
  double lo = 0.0, hi = 0.0;
  int steps = 81;       // coarse scan points
  int refinements = 2;  // each zooms onto +-1 coarse step around the best
};

// What the conjugate image should look like and where to look for it.
struct ReconstructionTarget {
  std::vector<double> template_intensity;  // object intensity, spacing = grid dx, centred on the object
  double object_x0 = 0.0;
  double object_width = 0.0;
  double carrier_frequency = 0.0;  // of the conjugate order, cycles/length, signed
  double shift_range = 0.0;        // +- lateral search around the predicted centre
};

// Template covering twice the object width, sampled from the object-plane field.
ReconstructionTarget make_target(const ScalarField& object_plane, double x0, double width, double conjugate_carrier);

struct ReconstructOptions {
  PropagationOptions propagation;
  int threads = 1;
};

struct Reconstruction {
  double best_distance = 0.0;
  ScalarField image;
  double score = 0.0;
  double conjugate_center = 0.0;  // best-matching window centre
  double real_center = 0.0;       // intensity centroid around the real-order prediction
  double real_fraction = 0.0;     // share of total power in that window
  std::vector<std::pair<double, double>> scan;  // (distance, score), sorted by distance
};

// Predicted lateral offset of a diffraction order after distance z.
double order_center(double x0, double z, double wavelength, double incidence, double frequency);

double window_score(const ScalarField& image, const ReconstructionTarget& target, double center, double* where = nullptr);

Reconstruction reconstruct(const TFProfile& hologram, const ImprintModel& model, const ScalarField& reading,
                           const ReconstructionTarget& target, const SearchRange& range,
                           const ReconstructOptions& opt = {});

// A rectangular aperture written into a 1D harmonic Thomas-Fermi condensate
// by off-axis interference with a tilted plane wave, read by a slow sodium
// beam. SI units throughout.
struct RectHologramScenario {
  std::size_t samples = 4096;
  double spacing = 0.25e-6;
  double reading_mass = kSodiumMass;
  double reading_velocity = 0.1;
  double reading_waist = 40e-6;
  double writing_wavelength = 1e-6;
  double object_width = 20e-6;
  double object_distance = 200e-6;  // aperture to condensate, for the writing light
  double reference_frequency = 0.5e6;  // reference = exp(-2 pi i f x)
  double trap_frequency = 2.0 * std::numbers::pi * 20.0;  // rad/s
  double tf_radius = 60e-6;
  double atom_number = 1e5;
  double writing_fraction = 0.1;  // writing strength in units of the bare trap mu
  double eta_scale = 1.0;         // eta in units of g / writing strength
  double thickness = 1e-6;
  double incidence = 0.0;
  SearchRange search{0.5e-3, 2.5e-3, 81, 2};

  void validate() const;
};

struct RectHologramResult {
  double lambda_db = 0.0;
  double g = 0.0;             // rad/s * m
  double mu_trap = 0.0;       // rad/s, bare trap
  double writing_strength = 0.0;
  ImprintModel model;
  ImprintDiagnostics diagnostics;
  ScalarField object_plane;
  ScalarField object_at_condensate;
  Hologram hologram;
  ReconstructionTarget target;
  Reconstruction reconstruction;
  std::vector<std::string> warnings;
};

RectHologramResult run_rect_hologram(const RectHologramScenario& s, int threads = 1);

}  // namespace mwo::holo
