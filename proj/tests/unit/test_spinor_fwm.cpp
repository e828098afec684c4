#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "mwo/error.hpp"
#include "mwo/fwm/spinor_fwm.hpp"

using namespace mwo;
using namespace mwo::fwm;
constexpr double pi = std::numbers::pi;

namespace {

FWMScenario scenario(int N, int m, double end = 2.0 * pi, std::size_t steps = 800) {
  FWMScenario s;
  s.N1 = N / 2;
  s.N2 = N / 2;
  s.m = m;
  s.time_grid = uniform_grid(end, steps);
  return s;
}

}  // namespace

TEST_CASE("couplings from scattering lengths") {
  auto c = couplings_from_scattering({0.7, 0.7, 2.0});
  CHECK(c.c2 == 0.0);
  CHECK(c.c0 == doctest::Approx(4.0 * pi * 0.7 / 2.0).epsilon(1e-15));

  const double M = 1.3;
  c = couplings_from_scattering({0.0, 3.0 * M / (4.0 * pi), M});
  CHECK(c.g2 == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(c.c0 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(c.c2 == doctest::Approx(1.0).epsilon(1e-14));

  c = couplings_from_scattering({2.0, 1.0, 1.0});
  CHECK(c.c2 < 0.0);

  CHECK_THROWS_AS(couplings_from_scattering({1.0, 1.0, 0.0}), PreconditionError);
  CHECK_THROWS_AS(couplings_from_scattering({1.0, 1.0, -1.0}), PreconditionError);
}

TEST_CASE("scenario validation") {
  auto s = scenario(10, 6);
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("m > N1"), PreconditionError);
  CHECK_THROWS_AS(build_fwm_hamiltonian(s), PreconditionError);
  s = scenario(10, 2);
  s.time_grid = {0.0, 1.0, 1.0};
  CHECK_THROWS_AS(s.validate(), PreconditionError);
  s.time_grid.clear();
  CHECK_THROWS_AS(s.validate(), PreconditionError);
}

TEST_CASE("sector for N = 100, m = 0 has 51 states indexed by n-1") {
  auto h = build_fwm_hamiltonian(scenario(100, 0));
  REQUIRE(h.sector->dimension() == 51);
  for (std::size_t k = 0; k < 51; ++k) {
    const auto& s = h.sector->state(k);
    CHECK(s[minus1] == static_cast<int>(k));
    CHECK(s[plus1] - s[minus1] == 0);
    CHECK(s[plus1] + s[zero1] == 50);
    CHECK(s[minus1] + s[zero2] == 50);
  }
  // strictly tridiagonal and real symmetric
  for (Eigen::Index c = 0; c < h.matrix.outerSize(); ++c)
    for (fock::SparseMatrix::InnerIterator it(h.matrix, c); it; ++it) {
      CHECK(std::abs(it.row() - it.col()) <= 1);
      CHECK(it.value().imag() == 0.0);
      CHECK(it.value() == h.matrix.coeff(it.col(), it.row()));
    }
  // m = 5 shrinks the sector to min(N1 - m, N2) + 1
  CHECK(build_fwm_hamiltonian(scenario(100, 5)).sector->dimension() == 46);
}

TEST_CASE("closed-form matrix equals the generic operator build") {
  for (int N1 = 0; N1 <= 4; ++N1)
    for (int N2 = 0; N2 <= 4; ++N2)
      for (int m = 0; m <= N1; ++m)
        for (bool drop : {true, false}) {
          FWMScenario s;
          s.N1 = N1;
          s.N2 = N2;
          s.m = m;
          s.c2 = 0.37;
          s.c0 = 1.1;
          s.kinetic = 0.4;
          s.drop_constant_terms = drop;
          const auto h = build_fwm_hamiltonian(s);
          const fock::DenseMatrix oracle(fock::build_matrix(fwm_operator(s), *h.sector));
          CHECK(fock::max_abs(fock::DenseMatrix(h.matrix) - oracle) <= 1e-12);
        }
}

TEST_CASE("c2 = 0 freezes the populations and yields no revivals") {
  auto s = scenario(20, 3);
  s.c2 = 0.0;
  s.drop_constant_terms = true;
  CHECK(build_fwm_hamiltonian(s).matrix.nonZeros() == 0);
  auto series = run_population_series(s);
  for (const auto& p : series.populations) {
    CHECK(p[plus1] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(p[zero1] == doctest::Approx(7.0).epsilon(1e-14));
  }
  CHECK(detect_revivals(series).empty());
}

TEST_CASE("populations start at the Fock initial state and conserve charges") {
  for (int m : {0, 5}) {
    auto s = scenario(60, m, 2.0 * pi, 400);
    auto series = run_population_series(s);
    const auto& p0 = series.populations.front();
    CHECK(p0[plus1] == m);
    CHECK(p0[minus1] == 0.0);
    CHECK(p0[zero1] == 30 - m);
    CHECK(p0[zero2] == 30.0);
    for (const auto& p : series.populations) {
      CHECK(std::abs(p[0] + p[1] + p[2] + p[3] - 60.0) <= 1e-9);
      CHECK(std::abs(p[plus1] - p[minus1] - m) <= 1e-9);
      CHECK(std::abs(p[plus1] + p[zero1] - 30.0) <= 1e-9);
      CHECK(std::abs(p[minus1] + p[zero2] - 30.0) <= 1e-9);
      for (double v : p) CHECK(v >= -1e-12);
    }
  }
}

TEST_CASE("constant-term gauge does not change observables") {
  auto a = scenario(40, 2, 2.0 * pi, 300);
  a.c0 = 3.7;
  a.kinetic = 12.5;
  auto b = a;
  b.drop_constant_terms = true;
  const auto ra = correlation_report(a);
  const auto rb = correlation_report(b);
  REQUIRE(ra.points.size() == rb.points.size());
  for (std::size_t k = 0; k < ra.points.size(); ++k) {
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(std::abs(ra.points[k].intensity[i] - rb.points[k].intensity[i]) <= 1e-9);
      REQUIRE(ra.points[k].g2[i].has_value() == rb.points[k].g2[i].has_value());
      if (ra.points[k].g2[i]) CHECK(std::abs(*ra.points[k].g2[i] - *rb.points[k].g2[i]) <= 1e-9);
    }
    for (std::size_t j = 0; j < 6; ++j) {
      REQUIRE(ra.points[k].g2_pair[j].has_value() == rb.points[k].g2_pair[j].has_value());
      if (ra.points[k].g2_pair[j]) CHECK(std::abs(*ra.points[k].g2_pair[j] - *rb.points[k].g2_pair[j]) <= 1e-9);
    }
  }
}

TEST_CASE("first maxima follow the prose fractions") {
  auto a = first_maximum(run_population_series(scenario(100, 0, pi, 800)));
  REQUIRE(a);
  CHECK(a->value >= 28.0);
  CHECK(a->value <= 40.0);
  auto b = first_maximum(run_population_series(scenario(100, 5, pi, 800)));
  REQUIRE(b);
  CHECK(b->value >= 42.0);
  CHECK(b->value <= 58.0);
}

TEST_CASE("revival detection") {
  auto series = run_population_series(scenario(100, 0, 2.0 * pi, 800));
  auto rev = detect_revivals(series);
  REQUIRE(!rev.empty());
  CHECK(rev.front() == doctest::Approx(pi).epsilon(0.02 / pi));
  for (double t : rev) CHECK(t > 0.8 * pi);

  auto coarse = run_population_series(scenario(100, 0, 2.0 * pi, 150));
  CHECK_THROWS_WITH_AS(detect_revivals(coarse), doctest::Contains("too coarse"), PreconditionError);
  auto shorter = run_population_series(scenario(100, 0, 1.5 * pi, 600));
  CHECK_THROWS_AS(detect_revivals(shorter), PreconditionError);
}

TEST_CASE("parabola refinement recovers an off-grid peak") {
  PopulationSeries s;
  s.two_c2_t = uniform_grid(2.0, 20);
  for (double t : s.two_c2_t) s.populations.push_back({3.0 - (t - 0.537) * (t - 0.537), 0, 0, 0});
  auto p = first_maximum(s);
  REQUIRE(p);
  CHECK(p->two_c2_t == doctest::Approx(0.537).epsilon(1e-12));
  CHECK(p->value == doctest::Approx(3.0).epsilon(1e-12));
}

// The reduced spectrum is not commensurate (the diagonal mixes n(n-1) with
// n*N terms), so the series only approximately repeats after 2 pi. Kept as an
// expected failure to record that measured fact.
TEST_CASE("populations repeat with period 2 pi" * doctest::should_fail()) {
  auto s = scenario(100, 0, 4.0 * pi, 800);
  auto series = run_population_series(s);
  double worst = 0.0;
  for (std::size_t i = 0; i <= 400; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      worst = std::max(worst, std::abs(series.populations[i][j] - series.populations[i + 400][j]));
  CHECK(worst <= 1e-6);
}

TEST_CASE("Fock g2 at t = 0") {
  auto s = scenario(100, 5, 0.1, 2);
  auto rep = correlation_report(s);
  const auto& p = rep.points.front();
  REQUIRE(p.g2[plus1]);
  CHECK(*p.g2[plus1] == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(!p.g2[minus1]);  // empty mode: undefined, not zero
  CHECK(!p.g2_pair[pair_index(plus1, minus1)]);
  CHECK(*p.g2[zero1] == doctest::Approx(1.0 - 1.0 / 45.0).epsilon(1e-14));
}

TEST_CASE("side-side pairs break the classical bound, central-side pairs do not") {
  auto rep = correlation_report(scenario(100, 0, pi, 400));
  double rmax = 0.0;
  for (std::size_t k = 0; k < rep.points.size(); ++k) {
    const double t = rep.two_c2_t[k];
    if (t <= 0.0 || t >= pi) continue;
    const auto& p = rep.points[k];
    if (auto r = p.r[pair_index(plus1, minus1)]) rmax = std::max(rmax, *r);
    if (auto r = p.r[pair_index(plus1, zero1)]) CHECK(*r <= 1.0 + 1e-9);
  }
  CHECK(rmax > 1.0);
}

TEST_CASE("quantum bound holds for every pair") {
  for (auto [N, m] : {std::pair{20, 0}, {40, 3}, {100, 0}, {100, 5}}) {
    auto rep = correlation_report(scenario(N, m, 2.0 * pi, 200));
    for (const auto& p : rep.points)
      for (const auto& q : p.q)
        if (q) CHECK(*q <= 1.0 + 1e-9);
  }
  // unequal pair populations
  FWMScenario s;
  s.N1 = 12;
  s.N2 = 7;
  s.m = 2;
  s.time_grid = uniform_grid(2.0 * pi, 100);
  for (const auto& p : correlation_report(s).points)
    for (const auto& q : p.q)
      if (q) CHECK(*q <= 1.0 + 1e-9);
}

TEST_CASE("sector evolution matches the full four-mode space at N = 4") {
  FWMScenario s;
  s.N1 = 2;
  s.N2 = 2;
  s.m = 0;
  s.time_grid = uniform_grid(2.0 * pi, 64);
  const auto ham = build_fwm_hamiltonian(s);
  const auto spec = fock::diagonalize(ham.matrix);
  const auto psi0 = fock::StateVector::basis(ham.sector, s.initial_occupation());

  auto box = std::make_shared<const fock::FockSector>(
      fock::enumerate_sector(fock::ModeSet(mode_labels()), {}, 4));
  const auto full_spec = fock::diagonalize(fock::build_matrix(fwm_operator(s), *box));
  const auto full0 = fock::StateVector::basis(box, s.initial_occupation());

  for (double tau : s.time_grid) {
    const auto a = fock::evolve(psi0, spec, 0.5 * tau);
    const auto b = fock::evolve(full0, full_spec, 0.5 * tau);
    for (std::size_t i = 0; i < box->dimension(); ++i) {
      const auto& occ = box->state(i);
      CHECK(std::abs(a.amplitude(occ) - b.amplitudes()(static_cast<Eigen::Index>(i))) <= 1e-10);
    }
  }
}

TEST_CASE("csv layout") {
  auto rep = correlation_report(scenario(10, 0, 0.5, 5));
  std::ostringstream os;
  write_csv(os, rep);
  std::istringstream in(os.str());
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "two_c2_t,n1,nm1,n01,n02,g2_1,g2_m1,g2_01,g2_02,g2_1_m1,g2_1_01,r_1_m1,r_1_01,q_1_m1");
  // n1 = n-1 = 0 at t = 0: their g2 cells are empty
  INFO(first);
  CHECK(first.rfind("0,0,0,5,5,,,0.8,0.8,,,,,", 0) == 0);
  std::size_t lines = 1;
  for (std::string l; std::getline(in, l);) ++lines;
  CHECK(lines == 6);
}
