#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mwo::pamp {

using Complex = std::complex<double>;
using Matrix3 = Eigen::Matrix3cd;
using Vector3 = Eigen::Vector3cd;
using Matrix6 = Eigen::Matrix<Complex, 6, 6>;
using Vector6 = Eigen::Matrix<Complex, 6, 1>;

// SI inputs. The probe frequency enters only through the pump-probe
// difference omega0 - omega, given directly.
struct PumpProbeInput {
  double dipole = 0.0;            // C m
  double cavity_length = 0.0;     // m
  double cross_section = 0.0;     // m^2
  double probe_wavenumber = 0.0;  // 1/m
  double detuning = 0.0;          // Delta, rad/s
  Complex pump_rabi{0.0, 0.0};    // Omega_0, rad/s
  double atom_number = 0.0;
  double recoil_momentum = 0.0;   // K, 1/m
  double mass = 0.0;              // kg
  double pump_minus_probe = 0.0;  // omega0 - omega, rad/s

  double hbar = 1.054571817e-34;
  double c = 299792458.0;
  double epsilon0 = 8.8541878128e-12;

  void validate() const;
};

struct ThreeModeParams {
  double chi = 0.0;
  double delta = 0.0;
  double omega_r = 1.0;  // rad/s; times are omega_r t throughout

  void validate() const;
};

// g = d sqrt(c k / (2 hbar eps0 L S))
double atom_probe_coupling(const PumpProbeInput& in);

// omega_r = hbar K^2 / 2M, chi = |g||Omega0| sqrt(N) / (2 omega_r |Delta|),
// delta = (omega0 - omega) / omega_r. The sign of Delta is absorbed in the
// phase of the probe mode, so chi >= 0.
ThreeModeParams derive_params(const PumpProbeInput& in);

// i dv/dt = omega_r M v for v = (a, c+, c-^dagger).
Matrix3 drift_matrix(const ThreeModeParams& p);

// exp(-i M tau). Eigendecomposition, or scaling and squaring when the
// eigenvector basis is ill conditioned (M is defective at thresholds).
Matrix3 mode_propagator(const ThreeModeParams& p, double tau);

enum Mode : std::size_t { mode_a = 0, mode_plus = 1, mode_minus = 2 };

// First and second moments of (a, c+, c-). Internally the ordered moments
// S_kl = <X_k X_l> of X = (a, c+, c-, a^+, c+^+, c-^+) and the means <X_k>.
class GaussianState {
 public:
  static GaussianState vacuum();
  // Coherent amplitudes for (a, c+, c-).
  static GaussianState coherent(const std::array<Complex, 3>& alpha);
  static GaussianState from_moments(const Vector6& means, const Matrix6& moments);

  const Vector6& means6() const { return means_; }
  const Matrix6& moments6() const { return moments_; }

  Vector3 means() const { return means_.head<3>(); }
  // <v_i^+ v_j> and <v_i v_j>
  Matrix3 normal() const { return moments_.block<3, 3>(3, 0); }
  Matrix3 anomalous() const { return moments_.block<3, 3>(0, 0); }

  // Ordered fourth moment <X_p X_q X_r X_s> by Wick's theorem.
  Complex moment4(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const;

  // Throws PreconditionError unless the moments are consistent: conjugation
  // symmetry, [X_k, X_l] equal to the symplectic form, and <dX_k^+ dX_l>
  // positive semidefinite (eigenvalues >= -tol).
  void validate(double tol = 1e-9) const;

 private:
  GaussianState(Vector6 m, Matrix6 s) : means_(std::move(m)), moments_(std::move(s)) {}
  Vector6 means_;
  Matrix6 moments_;
};

// [X_k, X_l]: [[0, I], [-I, 0]].
Matrix6 symplectic_form();

// X(tau) = T X(0), built from exp(-i M tau).
Matrix6 quadrature_propagator(const ThreeModeParams& p, double tau);

// Throws NumericalError("propagator inconsistent") if T Omega T^T drifts
// from Omega by more than 1e-9 * max(1, |tau|) * ||T||^2.
GaussianState propagate(const GaussianState& state0, const ThreeModeParams& p, double tau);

inline constexpr double kPampIntensityFloor = 1e-12;

// Pairs in CSV order.
enum Pair : std::size_t { pair_am = 0, pair_ap = 1, pair_mp = 2 };
constexpr std::array<std::array<std::size_t, 2>, 3> kPairs{{{mode_a, mode_minus}, {mode_a, mode_plus}, {mode_minus, mode_plus}}};

struct ThreeModeCorrelations {
  std::array<double, 3> intensity{};
  std::array<std::optional<double>, 3> g2{};
  std::array<std::optional<double>, 3> g2_pair{};
  std::array<std::optional<double>, 3> r{};
  std::array<std::optional<double>, 3> q{};
};

// Fills g2, margins and flags from intensities and normally ordered moments.
ThreeModeCorrelations assemble_correlations(const std::array<double, 3>& intensity,
                                            const std::array<double, 3>& self_moment,
                                            const std::array<double, 3>& pair_moment, double floor);

ThreeModeCorrelations correlations(const GaussianState& state);

// [2 + 1/(I_a + I_+)]^{1/2} [2 + 1/I_-]^{1/2}
double spontaneous_g2_am(double I_a, double I_p, double I_m);

struct ThreeModeSeries {
  std::vector<double> omega_r_t;
  std::vector<ThreeModeCorrelations> points;
  std::vector<double> charge;  // <n+ - n- + n_a>
};

ThreeModeSeries run_series(const GaussianState& state0, const ThreeModeParams& p, const std::vector<double>& grid);

const std::vector<std::string>& csv_columns();
void write_csv(std::ostream& os, const ThreeModeSeries& s);

struct CrossoverRow {
  Complex alpha;
  std::optional<double> g2_am;
  std::optional<double> classical_bound;
  std::optional<double> quantum_bound;
  std::optional<double> r_am;
  std::optional<double> gap;  // g2_am - classical bound
};

// Probe coherent with amplitude alpha, side modes in vacuum, evaluated at tau.
std::vector<CrossoverRow> crossover_scan(const ThreeModeParams& p, const std::vector<Complex>& alphas, double tau);

}  // namespace mwo::pamp
