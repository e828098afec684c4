#include "mwo/pamp/parametric_amp.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "mwo/csv.hpp"
#include "mwo/error.hpp"

namespace mwo::pamp {

namespace {

constexpr std::size_t dag(std::size_t k) { return (k + 3) % 6; }

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void PumpProbeInput::validate() const {
  if (detuning == 0.0 || !finite(detuning)) throw PreconditionError("pump-probe: detuning Delta must be nonzero");
  if (!(atom_number >= 0.0) || !finite(atom_number)) throw PreconditionError("pump-probe: N must be >= 0");
  if (!(mass > 0.0) || !finite(mass)) throw PreconditionError("pump-probe: mass must be positive");
  if (!(recoil_momentum != 0.0) || !finite(recoil_momentum)) throw PreconditionError("pump-probe: recoil frequency must be positive");
  if (!(cavity_length > 0.0) || !(cross_section > 0.0) || !(probe_wavenumber > 0.0))
    throw PreconditionError("pump-probe: L, S and k must be positive");
  if (!(hbar > 0.0) || !(c > 0.0) || !(epsilon0 > 0.0)) throw PreconditionError("pump-probe: constants must be positive");
  if (!finite(dipole) || !finite(std::abs(pump_rabi)) || !finite(pump_minus_probe))
    throw PreconditionError("pump-probe: inputs must be finite");
}

void ThreeModeParams::validate() const {
  if (!finite(chi) || !finite(delta)) throw PreconditionError("three-mode: chi and delta must be finite");
  if (chi < 0.0) throw PreconditionError("three-mode: chi must be >= 0");
  if (!(omega_r > 0.0) || !finite(omega_r)) throw PreconditionError("three-mode: omega_r must be positive");
}

double atom_probe_coupling(const PumpProbeInput& in) {
  return in.dipole * std::sqrt(in.c * in.probe_wavenumber / (2.0 * in.hbar * in.epsilon0 * in.cavity_length * in.cross_section));
}

ThreeModeParams derive_params(const PumpProbeInput& in) {
  in.validate();
  ThreeModeParams p;
  p.omega_r = in.hbar * in.recoil_momentum * in.recoil_momentum / (2.0 * in.mass);
  const double g = std::abs(atom_probe_coupling(in));
  p.chi = g * std::abs(in.pump_rabi) * std::sqrt(in.atom_number) / (2.0 * p.omega_r * std::abs(in.detuning));
  p.delta = in.pump_minus_probe / p.omega_r;
  return p;
}

Matrix3 drift_matrix(const ThreeModeParams& p) {
  Matrix3 m;
  m << -p.delta, p.chi, p.chi,
       p.chi, 1.0, 0.0,
       -p.chi, 0.0, -1.0;
  return m;
}

Matrix3 mode_propagator(const ThreeModeParams& p, double tau) {
  p.validate();
  const Matrix3 m = drift_matrix(p);
  if (tau == 0.0) return Matrix3::Identity();
  Eigen::ComplexEigenSolver<Matrix3> es(m);
  if (es.info() == Eigen::Success) {
    const Matrix3& v = es.eigenvectors();
    Eigen::FullPivLU<Matrix3> lu(v);
    if (lu.isInvertible()) {
      const Matrix3 vinv = lu.inverse();
      const double cond = v.norm() * vinv.norm();  // Frobenius estimate
      if (cond <= 1e8) {
        Vector3 phase;
        for (int k = 0; k < 3; ++k) phase(k) = std::exp(Complex(0.0, -tau) * es.eigenvalues()(k));
        return v * phase.asDiagonal() * vinv;
      }
    }
  }
  const Matrix3 a = Complex(0.0, -tau) * m;
  return a.exp();
}

Matrix6 symplectic_form() {
  Matrix6 o = Matrix6::Zero();
  for (int k = 0; k < 3; ++k) {
    o(k, k + 3) = 1.0;
    o(k + 3, k) = -1.0;
  }
  return o;
}

Matrix6 quadrature_propagator(const ThreeModeParams& p, double tau) {
  const Matrix3 u = mode_propagator(p, tau);
  Matrix6 t = Matrix6::Zero();
  // a(t), c+(t) from w = (a, c+, c-^+)
  for (int r = 0; r < 2; ++r) {
    t(r, 0) = u(r, 0);
    t(r, 1) = u(r, 1);
    t(r, 5) = u(r, 2);
  }
  // c-(t) = (c-^+(t))^+
  t(2, 3) = std::conj(u(2, 0));
  t(2, 4) = std::conj(u(2, 1));
  t(2, 2) = std::conj(u(2, 2));
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t m = 0; m < 6; ++m) t(dag(k), dag(m)) = std::conj(t(k, m));
  return t;
}

GaussianState GaussianState::vacuum() { return coherent({Complex{}, Complex{}, Complex{}}); }

GaussianState GaussianState::coherent(const std::array<Complex, 3>& alpha) {
  Vector6 m;
  for (std::size_t k = 0; k < 3; ++k) {
    m(k) = alpha[k];
    m(dag(k)) = std::conj(alpha[k]);
  }
  Matrix6 s = m * m.transpose();
  for (int k = 0; k < 3; ++k) s(k, k + 3) += 1.0;  // <a a^+> = |alpha|^2 + 1
  return GaussianState(m, s);
}

GaussianState GaussianState::from_moments(const Vector6& means, const Matrix6& moments) {
  GaussianState g(means, moments);
  g.validate();
  return g;
}

Complex GaussianState::moment4(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
  const auto& m = means_;
  const Matrix6 f = moments_ - m * m.transpose();
  return m(p) * m(q) * m(r) * m(s) + f(p, q) * m(r) * m(s) + f(p, r) * m(q) * m(s) + f(p, s) * m(q) * m(r) +
         f(q, r) * m(p) * m(s) + f(q, s) * m(p) * m(r) + f(r, s) * m(p) * m(q) + f(p, q) * f(r, s) +
         f(p, r) * f(q, s) + f(p, s) * f(q, r);
}

void GaussianState::validate(double tol) const {
  if (!means_.allFinite() || !moments_.allFinite()) throw PreconditionError("gaussian state: non-finite moments");
  const double scale = std::max(1.0, moments_.cwiseAbs().maxCoeff());
  for (std::size_t k = 0; k < 6; ++k) {
    if (std::abs(means_(dag(k)) - std::conj(means_(k))) > tol * scale)
      throw PreconditionError("gaussian state: means are not conjugation symmetric");
    for (std::size_t l = 0; l < 6; ++l)
      if (std::abs(moments_(dag(k), dag(l)) - std::conj(moments_(l, k))) > tol * scale)
        throw PreconditionError("gaussian state: moments are not conjugation symmetric");
  }
  const Matrix6 comm = moments_ - moments_.transpose();
  if ((comm - symplectic_form()).cwiseAbs().maxCoeff() > tol * scale)
    throw PreconditionError("gaussian state: commutators differ from the symplectic form");
  // Gram matrix <dX_k^+ dX_l>
  const Matrix6 f = moments_ - means_ * means_.transpose();
  Matrix6 gram;
  for (std::size_t k = 0; k < 6; ++k)
    for (std::size_t l = 0; l < 6; ++l) gram(k, l) = f(dag(k), l);
  const Matrix6 herm = 0.5 * (gram + gram.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix6> es(herm, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol * scale)
    throw PreconditionError("gaussian state: violates bosonic positivity");
}

GaussianState propagate(const GaussianState& state0, const ThreeModeParams& p, double tau) {
  p.validate();
  if (!std::isfinite(tau)) throw PreconditionError("propagate: non-finite time");
  const Matrix6 t = quadrature_propagator(p, tau);
  const Matrix6 omega = symplectic_form();
  const double norm2 = std::max(1.0, t.cwiseAbs().maxCoeff() * t.cwiseAbs().maxCoeff());
  const double drift = (t * omega * t.transpose() - omega).cwiseAbs().maxCoeff();
  if (drift > 1e-9 * std::max(1.0, std::abs(tau)) * norm2) throw NumericalError("propagator inconsistent");
  Vector6 m = t * state0.means6();
  Matrix6 s = t * state0.moments6() * t.transpose();
  return GaussianState::from_moments(m, s);
}

ThreeModeCorrelations assemble_correlations(const std::array<double, 3>& intensity,
                                            const std::array<double, 3>& self_moment,
                                            const std::array<double, 3>& pair_moment, double floor) {
  ThreeModeCorrelations c;
  c.intensity = intensity;
  std::array<bool, 3> defined{};
  for (std::size_t i = 0; i < 3; ++i) {
    defined[i] = intensity[i] >= floor;
    if (defined[i]) c.g2[i] = self_moment[i] / (intensity[i] * intensity[i]);
  }
  for (std::size_t k = 0; k < 3; ++k) {
    const auto [i, j] = kPairs[k];
    if (!defined[i] || !defined[j]) continue;
    const double g = pair_moment[k] / (intensity[i] * intensity[j]);
    c.g2_pair[k] = g;
    const double classical = *c.g2[i] * *c.g2[j];
    if (classical > 0.0) c.r[k] = g / std::sqrt(classical);
    c.q[k] = g / std::sqrt((*c.g2[i] + 1.0 / intensity[i]) * (*c.g2[j] + 1.0 / intensity[j]));
  }
  return c;
}

ThreeModeCorrelations correlations(const GaussianState& st) {
  std::array<double, 3> inten{}, self{}, pair{};
  for (std::size_t i = 0; i < 3; ++i) {
    inten[i] = st.moments6()(dag(i), i).real();
    self[i] = st.moment4(dag(i), dag(i), i, i).real();
  }
  for (std::size_t k = 0; k < 3; ++k) {
    const auto [i, j] = kPairs[k];
    pair[k] = st.moment4(dag(i), dag(j), j, i).real();
  }
  return assemble_correlations(inten, self, pair, kPampIntensityFloor);
}

double spontaneous_g2_am(double I_a, double I_p, double I_m) {
  return std::sqrt(2.0 + 1.0 / (I_a + I_p)) * std::sqrt(2.0 + 1.0 / I_m);
}

ThreeModeSeries run_series(const GaussianState& state0, const ThreeModeParams& p, const std::vector<double>& grid) {
  state0.validate();
  ThreeModeSeries s;
  s.omega_r_t = grid;
  for (double tau : grid) {
    auto c = correlations(propagate(state0, p, tau));
    s.charge.push_back(c.intensity[mode_plus] - c.intensity[mode_minus] + c.intensity[mode_a]);
    s.points.push_back(std::move(c));
  }
  return s;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{"omega_r_t", "I_a",   "I_p",  "I_m",  "g2_a",  "g2_p", "g2_m", "g2_am",
                                             "g2_ap",     "g2_mp", "r_am", "q_am", "r_mp",  "q_mp", "r_ap"};
  return cols;
}

void write_csv(std::ostream& os, const ThreeModeSeries& s) {
  write_csv_row(os, csv_columns());
  for (std::size_t k = 0; k < s.points.size(); ++k) {
    const auto& c = s.points[k];
    std::vector<std::string> row{format_double(s.omega_r_t[k])};
    for (double v : c.intensity) row.push_back(format_double(v));
    for (const auto& g : c.g2) row.push_back(format_cell(g));
    for (const auto& g : c.g2_pair) row.push_back(format_cell(g));
    row.push_back(format_cell(c.r[pair_am]));
    row.push_back(format_cell(c.q[pair_am]));
    row.push_back(format_cell(c.r[pair_mp]));
    row.push_back(format_cell(c.q[pair_mp]));
    row.push_back(format_cell(c.r[pair_ap]));
    write_csv_row(os, row);
  }
}

std::vector<CrossoverRow> crossover_scan(const ThreeModeParams& p, const std::vector<Complex>& alphas, double tau) {
  for (std::size_t i = 1; i < alphas.size(); ++i)
    if (std::abs(alphas[i]) < std::abs(alphas[i - 1]))
      throw PreconditionError("crossover_scan: amplitudes must be sorted by modulus");
  std::vector<CrossoverRow> rows;
  for (const auto& alpha : alphas) {
    const auto c = correlations(propagate(GaussianState::coherent({alpha, 0.0, 0.0}), p, tau));
    CrossoverRow row{alpha, c.g2_pair[pair_am], {}, {}, c.r[pair_am], {}};
    if (c.g2[mode_a] && c.g2[mode_minus]) {
      const double ia = c.intensity[mode_a], im = c.intensity[mode_minus];
      row.classical_bound = std::sqrt(*c.g2[mode_a] * *c.g2[mode_minus]);
      row.quantum_bound = std::sqrt((*c.g2[mode_a] + 1.0 / ia) * (*c.g2[mode_minus] + 1.0 / im));
      row.gap = *row.g2_am - *row.classical_bound;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mwo::pamp
