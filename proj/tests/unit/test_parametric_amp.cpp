#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

#include "mwo/error.hpp"
#include "mwo/pamp/fock_oracle.hpp"
#include "mwo/pamp/parametric_amp.hpp"

using namespace mwo;
using namespace mwo::pamp;

namespace {

PumpProbeInput sodium_like() {
  PumpProbeInput in;
  in.dipole = 2.1e-29;
  in.cavity_length = 0.1;
  in.cross_section = 1e-8;
  in.probe_wavenumber = 2.0 * 3.141592653589793 / 589e-9;
  in.detuning = 2.0 * 3.141592653589793 * 1e9;
  in.pump_rabi = {1e8, 0.0};
  in.atom_number = 1e6;
  in.recoil_momentum = 2.0 * in.probe_wavenumber;
  in.mass = 3.8175e-26;
  in.pump_minus_probe = 0.0;
  return in;
}

std::vector<double> grid(double end, int n) {
  std::vector<double> t;
  for (int i = 0; i <= n; ++i) t.push_back(end * i / n);
  return t;
}

}  // namespace

TEST_CASE("derived parameters") {
  auto in = sodium_like();
  auto p = derive_params(in);
  CHECK(p.omega_r == doctest::Approx(in.hbar * in.recoil_momentum * in.recoil_momentum / (2.0 * in.mass)));
  CHECK(p.chi > 0.0);

  auto doubled = in;
  doubled.atom_number *= 2.0;
  CHECK(derive_params(doubled).chi == doctest::Approx(std::sqrt(2.0) * p.chi).epsilon(1e-14));

  auto empty = in;
  empty.atom_number = 0.0;
  CHECK(derive_params(empty).chi == 0.0);

  // |g||Omega0| sqrt(N) = 2 omega_r Delta -> chi = 1
  auto unit = in;
  const double g = atom_probe_coupling(in);
  unit.pump_rabi = {2.0 * p.omega_r * in.detuning / (g * std::sqrt(in.atom_number)), 0.0};
  CHECK(derive_params(unit).chi == doctest::Approx(1.0).epsilon(1e-12));

  // phase of Omega0 and sign of Delta do not change chi
  auto rotated = in;
  rotated.pump_rabi = std::polar(std::abs(in.pump_rabi), 1.2);
  rotated.detuning = -in.detuning;
  CHECK(derive_params(rotated).chi == doctest::Approx(p.chi).epsilon(1e-14));

  auto shifted = in;
  shifted.pump_minus_probe = 3.0 * p.omega_r;
  CHECK(derive_params(shifted).delta == doctest::Approx(3.0));

  auto bad = in;
  bad.detuning = 0.0;
  CHECK_THROWS_AS(derive_params(bad), PreconditionError);
  bad = in;
  bad.atom_number = -1.0;
  CHECK_THROWS_AS(derive_params(bad), PreconditionError);
}

TEST_CASE("drift matrix matches commutators of the three-mode Hamiltonian") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 2.0), d(-3.0, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    ThreeModeParams p{u(rng), d(rng), 1.0};
    const Matrix3 m = drift_matrix(p);
    CHECK((drift_from_symbolic_commutators(p) - m).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((drift_from_truncated_commutators(p) - m).cwiseAbs().maxCoeff() <= 1e-10);
  }
  ThreeModeParams free{0.0, 0.7, 1.0};
  const Matrix3 m = drift_matrix(free);
  CHECK(m(0, 0) == Complex(-0.7, 0.0));
  CHECK(m(1, 1) == Complex(1.0, 0.0));
  CHECK(m(2, 2) == Complex(-1.0, 0.0));
  CHECK((m - Matrix3(m.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("propagator basics") {
  ThreeModeParams p{1.0, 0.0, 1.0};
  CHECK((mode_propagator(p, 0.0) - Matrix3::Identity()).cwiseAbs().maxCoeff() == 0.0);
  // group property
  const Matrix3 a = mode_propagator(p, 0.4) * mode_propagator(p, 0.9);
  CHECK((a - mode_propagator(p, 1.3)).cwiseAbs().maxCoeff() <= 1e-12);
  // symplectic
  const Matrix6 t = quadrature_propagator(p, 1.7);
  CHECK((t * symplectic_form() * t.transpose() - symplectic_form()).cwiseAbs().maxCoeff() <= 1e-10);
  // vacuum stays vacuum without coupling
  auto v = propagate(GaussianState::vacuum(), ThreeModeParams{0.0, 0.3, 1.0}, 5.0);
  CHECK((v.moments6() - GaussianState::vacuum().moments6()).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("defective drift matrix falls back to scaling and squaring") {
  // chi, delta where two eigenvalues of M collide: scan delta = -1 for the
  // onset of complex eigenvalues and evaluate right at it.
  double lo = 0.0, hi = 2.0;
  auto complex_pair = [](double chi) {
    Eigen::ComplexEigenSolver<Matrix3> es(drift_matrix({chi, -1.0, 1.0}));
    double im = 0.0;
    for (int k = 0; k < 3; ++k) im = std::max(im, std::abs(es.eigenvalues()(k).imag()));
    return im > 1e-9;
  };
  REQUIRE(!complex_pair(lo));
  REQUIRE(complex_pair(hi));
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (complex_pair(mid) ? hi : lo) = mid;
  }
  ThreeModeParams p{hi, -1.0, 1.0};
  const Matrix3 u = mode_propagator(p, 2.0);
  const Matrix3 ref = (Complex(0.0, -2.0) * drift_matrix(p)).exp();
  CHECK((u - ref).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("instability growth rate follows the drift eigenvalues") {
  ThreeModeParams p{1.0, -1.0, 1.0};
  Eigen::ComplexEigenSolver<Matrix3> es(drift_matrix(p));
  double rate = 0.0;
  for (int k = 0; k < 3; ++k) rate = std::max(rate, es.eigenvalues()(k).imag());
  REQUIRE(rate > 0.0);
  const double t1 = 20.0, t2 = 24.0;
  const double i1 = correlations(propagate(GaussianState::vacuum(), p, t1)).intensity[mode_minus];
  const double i2 = correlations(propagate(GaussianState::vacuum(), p, t2)).intensity[mode_minus];
  CHECK(std::log(i2 / i1) / (t2 - t1) == doctest::Approx(2.0 * rate).epsilon(1e-3));
}

TEST_CASE("spontaneous correlations follow the closed forms") {
  ThreeModeParams p{1.0, 0.0, 1.0};
  auto s = run_series(GaussianState::vacuum(), p, grid(2.0, 200));
  for (std::size_t k = 1; k < s.points.size(); ++k) {
    const auto& c = s.points[k];
    REQUIRE(c.g2_pair[pair_ap]);
    CHECK(std::abs(*c.g2_pair[pair_ap] - 2.0) <= 1e-9);
    const double expect = spontaneous_g2_am(c.intensity[mode_a], c.intensity[mode_plus], c.intensity[mode_minus]);
    CHECK(std::abs(*c.g2_pair[pair_am] - expect) <= 1e-9 * expect);
    CHECK(std::abs(*c.g2_pair[pair_mp] - expect) <= 1e-9 * expect);
    // thermal single-mode statistics
    for (const auto& g : c.g2) CHECK(std::abs(*g - 2.0) <= 1e-9);
    // classical bound broken by (a,-) and (-,+), kept by (a,+)
    CHECK(*c.r[pair_am] > 1.0);
    CHECK(*c.r[pair_mp] > 1.0);
    CHECK(*c.r[pair_ap] <= 1.0 + 1e-9);
    for (const auto& q : c.q) CHECK(*q <= 1.0 + 1e-9);
    CHECK(*c.q[pair_mp] < *c.q[pair_am]);
  }
  // t = 0: vacuum, every ratio undefined
  CHECK(!s.points.front().g2[0]);
  CHECK(!s.points.front().g2_pair[pair_am]);
}

// The quantum margin q_am dips to about 0.969 near omega_r t = 1, short of the 0.99
// asked for; recorded as an expected failure.
TEST_CASE("spontaneous q_am stays above 0.99" * doctest::should_fail()) {
  ThreeModeParams p{1.0, 0.0, 1.0};
  auto s = run_series(GaussianState::vacuum(), p, grid(2.0, 40));
  for (std::size_t k = 1; k < s.points.size(); ++k) CHECK(*s.points[k].q[pair_am] >= 0.99);
}

TEST_CASE("conserved charge n+ - n- + n_a") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    ThreeModeParams p{std::abs(n(rng)), n(rng), 1.0};
    auto st = GaussianState::coherent({Complex(n(rng), n(rng)), Complex(n(rng), n(rng)), Complex(n(rng), n(rng))});
    auto s = run_series(st, p, grid(2.0, 50));
    for (double q : s.charge) CHECK(std::abs(q - s.charge.front()) <= 1e-9 * std::max(1.0, std::abs(q)));
  }
}

TEST_CASE("coherent input without coupling keeps g2 = 1") {
  auto st = GaussianState::coherent({Complex(1.5, 0.2), Complex(0.0, 0.7), Complex(-2.0, 0.0)});
  auto c = correlations(propagate(st, ThreeModeParams{0.0, 0.4, 1.0}, 3.0));
  for (const auto& g : c.g2) CHECK(*g == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& g : c.g2_pair) CHECK(*g == doctest::Approx(1.0).epsilon(1e-12));
}

namespace {

void compare_with_oracle(double max_population, int cutoff, double rel) {
  ThreeModeParams p{1.0, 0.0, 1.0};
  std::vector<double> t;
  for (double tau : grid(2.0, 40)) {
    auto c = correlations(propagate(GaussianState::vacuum(), p, tau));
    if (tau > 0.0 && std::max({c.intensity[0], c.intensity[1], c.intensity[2]}) < max_population) t.push_back(tau);
  }
  REQUIRE(t.size() > 10);
  auto fock = fock_oracle_vacuum(p, t, cutoff);
  for (std::size_t k = 0; k < t.size(); ++k) {
    auto g = correlations(propagate(GaussianState::vacuum(), p, t[k]));
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(std::abs(g.intensity[i] - fock[k].intensity[i]) <= rel * g.intensity[i]);
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(std::abs(*g.g2_pair[j] - *fock[k].g2_pair[j]) <= rel * *g.g2_pair[j]);
  }
}

}  // namespace

// Truncation error grows with the populations; at cutoff 30 it reaches 1e-3
// in g2 near a population of 2.7, so the full window uses cutoff 40.
TEST_CASE("Gaussian propagation agrees with the truncated Fock oracle") {
  compare_with_oracle(3.0, 40, 1e-3);
  compare_with_oracle(2.5, 30, 1e-3);
  // a later time pushes the populations past cutoff/10
  CHECK_THROWS_AS(fock_oracle_vacuum(ThreeModeParams{1.0, 0.0, 1.0}, {2.0}), PreconditionError);
}

TEST_CASE("crossover towards classical correlations") {
  ThreeModeParams p{1.0, 0.0, 1.0};
  auto rows = crossover_scan(p, {0.0, 1.0, 3.0, 10.0, 100.0}, 1.0);
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 0; i < 4; ++i) REQUIRE(rows[i].gap);
  for (std::size_t i = 1; i < 4; ++i) CHECK(*rows[i].gap <= *rows[i - 1].gap);
  CHECK(std::abs(*rows[4].r_am - 1.0) <= 1e-2);
  // alpha = 0 is the spontaneous case
  auto sp = correlations(propagate(GaussianState::vacuum(), p, 1.0));
  CHECK(*rows[0].g2_am == doctest::Approx(*sp.g2_pair[pair_am]).epsilon(1e-14));
  CHECK_THROWS_AS(crossover_scan(p, {3.0, 1.0}, 1.0), PreconditionError);
}

TEST_CASE("state validation") {
  GaussianState::vacuum().validate();
  Matrix6 s = GaussianState::vacuum().moments6();
  s(3, 0) = -0.5;  // negative occupation
  s(0, 3) = 0.5;
  CHECK_THROWS_AS(GaussianState::from_moments(Vector6::Zero(), s), PreconditionError);
  s = GaussianState::vacuum().moments6();
  s(0, 3) = 2.0;  // commutator broken
  CHECK_THROWS_AS(GaussianState::from_moments(Vector6::Zero(), s), PreconditionError);
}

TEST_CASE("csv layout") {
  auto s = run_series(GaussianState::vacuum(), ThreeModeParams{1.0, 0.0, 1.0}, grid(1.0, 4));
  std::ostringstream os;
  write_csv(os, s);
  std::istringstream in(os.str());
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "omega_r_t,I_a,I_p,I_m,g2_a,g2_p,g2_m,g2_am,g2_ap,g2_mp,r_am,q_am,r_mp,q_mp,r_ap");
  CHECK(first == "0,0,0,0,,,,,,,,,,,");
}
