#pragma once

#include <array>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mwo/fock/dynamics.hpp"

namespace mwo::fwm {

// hbar = 1 throughout.
struct ScatteringInput {
  double a0 = 0.0;  // f = 0 channel
  double a2 = 0.0;  // f = 2 channel
  double mass = 1.0;
};

struct SpinorCouplings {
  double g0 = 0.0, g2 = 0.0;
  double c0 = 0.0, c2 = 0.0;
};

// g_f = 4 pi a_f / M, c0 = (g0 + 2 g2)/3, c2 = (g2 - g0)/3.
SpinorCouplings couplings_from_scattering(const ScatteringInput& in);

// Mode order used everywhere in this module: m_F = +1, m_F = -1, and the two
// counterpropagating m_F = 0 modes.
inline const std::vector<std::string>& mode_labels() {
  static const std::vector<std::string> labels{"a1", "am1", "a01", "a02"};
  return labels;
}
enum Mode : std::size_t { plus1 = 0, minus1 = 1, zero1 = 2, zero2 = 3 };

struct FWMScenario {
  int N1 = 50;
  int N2 = 50;
  int m = 0;  // initial m_F = +1 population
  double c2 = 1.0;
  // Dimensionless 2 c2 t, measured with the reference coupling c2 = 1. The
  // scenario's c2 scales the Hamiltonian, so c2 = 0 freezes the dynamics.
  std::vector<double> time_grid;

  // Constant terms: kinetic * N + (c0/2) N (N - 1). They only shift the phase.
  bool drop_constant_terms = false;
  double c0 = 0.0;
  double kinetic = 0.0;

  void validate() const;
  int total() const { return N1 + N2; }
  fock::Occupation initial_occupation() const { return {m, 0, N1 - m, N2}; }
};

// n + 1 evenly spaced points on [0, end].
std::vector<double> uniform_grid(double end, std::size_t steps);

// Sector with N1, N2 and d = n1 - n-1 = m fixed. The basis index equals n-1.
std::shared_ptr<const fock::FockSector> fwm_sector(const FWMScenario& scn);

// The same Hamiltonian as a ladder-operator expression (used as an oracle).
fock::OperatorExpression fwm_operator(const FWMScenario& scn);

struct FWMHamiltonian {
  std::shared_ptr<const fock::FockSector> sector;
  fock::SparseMatrix matrix;
};

// Tridiagonal matrix filled from the closed-form elements.
FWMHamiltonian build_fwm_hamiltonian(const FWMScenario& scn);

struct PopulationSeries {
  std::vector<double> two_c2_t;
  std::vector<std::array<double, 4>> populations;
  std::vector<double> return_probability;  // |<psi0|psi(t)>|^2
};

PopulationSeries run_population_series(const FWMScenario& scn);

struct Extremum {
  double two_c2_t;
  double value;
};

// First interior local maximum of <n1>, refined by a parabola through the
// three grid points around it.
std::optional<Extremum> first_maximum(const PopulationSeries& s, std::size_t mode = plus1);

struct PlateauStats {
  double mean;
  double stddev;
};
inline constexpr double kPlateauBegin = 0.4 * 3.14159265358979323846;
inline constexpr double kPlateauEnd = 0.8 * 3.14159265358979323846;

PlateauStats plateau_stats(const std::vector<double>& t, const std::vector<double>& y,
                           double begin = kPlateauBegin, double end = kPlateauEnd);

// Revival times (2 c2 t) after the collapse plateau. Revivals are read off the
// return probability: a peak counts when it exceeds the plateau mean by three
// plateau standard deviations and the plateau maximum, one peak per excursion
// above that threshold.
// Refuses grids coarser than pi/100 or not reaching 2 pi.
std::vector<double> detect_revivals(const PopulationSeries& s);

inline constexpr double kIntensityFloor = 1e-8;

struct CorrelationPoint {
  std::array<double, 4> intensity{};
  std::array<std::optional<double>, 4> g2{};
  // Pair (i, j) with i < j lives at pair_index(i, j).
  std::array<std::optional<double>, 6> g2_pair{};
  std::array<std::optional<double>, 6> r{};  // against the classical bound
  std::array<std::optional<double>, 6> q{};  // against the intensity-corrected bound
};

constexpr std::size_t pair_index(std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  // (0,1) (0,2) (0,3) (1,2) (1,3) (2,3)
  return i == 0 ? j - 1 : (i == 1 ? j + 1 : 5);
}

struct CorrelationReport {
  std::vector<double> two_c2_t;
  std::vector<CorrelationPoint> points;
  std::vector<double> return_probability;
};

CorrelationReport correlation_report(const FWMScenario& scn);

// Columns: two_c2_t,n1,nm1,n01,n02,g2_1,g2_m1,g2_01,g2_02,g2_1_m1,g2_1_01,r_1_m1,r_1_01,q_1_m1
void write_csv(std::ostream& os, const CorrelationReport& report);
const std::vector<std::string>& csv_columns();

}  // namespace mwo::fwm
