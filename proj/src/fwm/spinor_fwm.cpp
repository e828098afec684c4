#include "mwo/fwm/spinor_fwm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mwo/csv.hpp"
#include "mwo/error.hpp"

namespace mwo::fwm {

using fock::Complex;
using fock::lower;
using fock::number;
using fock::OperatorExpression;
using fock::raise;

SpinorCouplings couplings_from_scattering(const ScatteringInput& in) {
  if (!(in.mass > 0.0) || !std::isfinite(in.mass)) throw PreconditionError("couplings: mass must be positive");
  if (!std::isfinite(in.a0) || !std::isfinite(in.a2)) throw PreconditionError("couplings: scattering lengths must be finite");
  SpinorCouplings c;
  c.g0 = 4.0 * std::numbers::pi * in.a0 / in.mass;
  c.g2 = 4.0 * std::numbers::pi * in.a2 / in.mass;
  c.c0 = (c.g0 + 2.0 * c.g2) / 3.0;
  c.c2 = (c.g2 - c.g0) / 3.0;
  return c;
}

void FWMScenario::validate() const {
  if (N1 < 0 || N2 < 0) throw PreconditionError("fwm: N1 and N2 must be non-negative");
  if (m < 0) throw PreconditionError("fwm: m must be non-negative");
  if (m > N1) throw PreconditionError("fwm: m > N1 (initial m_F=+1 population exceeds N1)");
  if (!std::isfinite(c2) || !std::isfinite(c0) || !std::isfinite(kinetic))
    throw PreconditionError("fwm: couplings must be finite");
  if (time_grid.empty()) throw PreconditionError("fwm: empty time grid");
  for (std::size_t i = 0; i < time_grid.size(); ++i) {
    if (!std::isfinite(time_grid[i])) throw PreconditionError("fwm: non-finite time");
    if (i && !(time_grid[i] > time_grid[i - 1])) throw PreconditionError("fwm: time grid must be strictly increasing");
  }
}

std::vector<double> uniform_grid(double end, std::size_t steps) {
  if (steps == 0) throw PreconditionError("uniform_grid: need at least one step");
  std::vector<double> t(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) t[i] = end * static_cast<double>(i) / static_cast<double>(steps);
  return t;
}

std::shared_ptr<const fock::FockSector> fwm_sector(const FWMScenario& scn) {
  if (scn.m < 0 || scn.m > scn.N1) throw PreconditionError("fwm: m > N1 (initial m_F=+1 population exceeds N1)");
  fock::ModeSet modes(mode_labels());
  std::vector<fock::ChargeRule> rules{
      {{1, 0, 1, 0}, scn.N1},
      {{0, 1, 0, 1}, scn.N2},
      {{1, -1, 0, 0}, scn.m},
  };
  return std::make_shared<const fock::FockSector>(fock::enumerate_sector(modes, std::move(rules)));
}

namespace {

double constant_shift(const FWMScenario& scn) {
  if (scn.drop_constant_terms) return 0.0;
  const double n = scn.total();
  return scn.kinetic * n + 0.5 * scn.c0 * n * (n - 1.0);
}

}  // namespace

OperatorExpression fwm_operator(const FWMScenario& scn) {
  const auto& L = mode_labels();
  const auto& a1 = L[plus1];
  const auto& am1 = L[minus1];
  const auto& a01 = L[zero1];
  const auto& a02 = L[zero2];

  OperatorExpression body = raise(a1) * raise(a1) * lower(a1) * lower(a1) +
                            raise(am1) * raise(am1) * lower(am1) * lower(am1) -
                            2.0 * number(a1) * number(am1) +
                            2.0 * (number(a1) + number(am1)) * (number(a01) + number(a02));
  OperatorExpression pair = raise(a1) * raise(am1) * lower(a01) * lower(a02);
  OperatorExpression h = 0.5 * scn.c2 * body + 2.0 * scn.c2 * (pair + pair.adjoint());
  const double shift = constant_shift(scn);
  if (shift != 0.0) h += fock::identity(Complex(shift, 0.0));
  return h;
}

FWMHamiltonian build_fwm_hamiltonian(const FWMScenario& scn) {
  if (scn.m > scn.N1) throw PreconditionError("fwm: m > N1 (initial m_F=+1 population exceeds N1)");
  auto sector = fwm_sector(scn);
  const auto dim = static_cast<Eigen::Index>(sector->dimension());
  const double c2 = scn.c2;
  const double shift = constant_shift(scn);

  std::vector<Eigen::Triplet<Complex>> trip;
  for (Eigen::Index k = 0; k < dim; ++k) {
    const auto& s = sector->state(static_cast<std::size_t>(k));
    const double n1 = s[plus1], nm1 = s[minus1], n01 = s[zero1], n02 = s[zero2];
    if (nm1 != static_cast<double>(k)) throw NumericalError("fwm: sector ordering does not follow n-1");
    const double diag =
        0.5 * c2 * (n1 * (n1 - 1.0) + nm1 * (nm1 - 1.0) - 2.0 * n1 * nm1 + 2.0 * (n1 + nm1) * (n01 + n02)) + shift;
    if (diag != 0.0) trip.emplace_back(k, k, diag);
    if (k + 1 < dim) {
      const double off = 2.0 * c2 * std::sqrt((n1 + 1.0) * (nm1 + 1.0) * n01 * n02);
      if (off != 0.0) {
        trip.emplace_back(k + 1, k, off);
        trip.emplace_back(k, k + 1, off);
      }
    }
  }
  fock::SparseMatrix h(dim, dim);
  h.setFromTriplets(trip.begin(), trip.end());
  h.makeCompressed();
  return {std::move(sector), std::move(h)};
}

namespace {

// Evolves the scenario's initial Fock state over its grid and hands each state
// to `visit`. Times are 2 c2 t with reference c2 = 1, hence t = tau / 2.
template <class Visit>
void sweep_states(const FWMScenario& scn, Visit&& visit) {
  scn.validate();
  // Diagonalize without the constant terms and put them back as a global
  // phase; that keeps a large c0 N^2 out of the eigensolver's round-off.
  auto reduced = scn;
  reduced.drop_constant_terms = true;
  const double shift = constant_shift(scn);
  const auto ham = build_fwm_hamiltonian(reduced);
  const auto spec = fock::diagonalize(ham.matrix);
  const auto psi0 = fock::StateVector::basis(ham.sector, scn.initial_occupation());
  for (std::size_t i = 0; i < scn.time_grid.size(); ++i) {
    const double t = 0.5 * scn.time_grid[i];
    auto psi = fock::evolve(psi0, spec, t);
    if (shift != 0.0) psi = fock::StateVector(psi.sector_ptr(), psi.amplitudes() * std::polar(1.0, -shift * t));
    const double overlap = std::norm(psi0.amplitudes().dot(psi.amplitudes()));
    visit(i, psi, overlap);
  }
}

std::array<OperatorExpression, 4> number_ops() {
  const auto& L = mode_labels();
  return {number(L[0]), number(L[1]), number(L[2]), number(L[3])};
}

}  // namespace

PopulationSeries run_population_series(const FWMScenario& scn) {
  PopulationSeries out;
  out.two_c2_t = scn.time_grid;
  out.populations.resize(scn.time_grid.size());
  out.return_probability.resize(scn.time_grid.size());
  const auto ops = number_ops();
  sweep_states(scn, [&](std::size_t i, const fock::StateVector& psi, double overlap) {
    for (std::size_t j = 0; j < 4; ++j) out.populations[i][j] = fock::expectation(psi, ops[j]).real();
    out.return_probability[i] = overlap;
  });
  return out;
}

namespace {

// Vertex of the parabola through three points; falls back to the middle point
// when the points are collinear.
Extremum parabola_peak(double t0, double y0, double t1, double y1, double t2, double y2) {
  const double d01 = (y1 - y0) / (t1 - t0);
  const double d12 = (y2 - y1) / (t2 - t1);
  const double a = (d12 - d01) / (t2 - t0);
  if (!(a < 0.0)) return {t1, y1};
  // y(t) = y0 + d01 (t - t0) + a (t - t0)(t - t1)
  double t = 0.5 * (t0 + t1) - d01 / (2.0 * a);
  t = std::clamp(t, t0, t2);
  return {t, y0 + d01 * (t - t0) + a * (t - t0) * (t - t1)};
}

bool is_local_max(const std::vector<double>& y, std::size_t i) {
  return i > 0 && i + 1 < y.size() && y[i] > y[i - 1] && y[i] >= y[i + 1];
}

}  // namespace

std::optional<Extremum> first_maximum(const PopulationSeries& s, std::size_t mode) {
  if (mode > 3) throw PreconditionError("first_maximum: mode index out of range");
  std::vector<double> y(s.populations.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = s.populations[i][mode];
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if (is_local_max(y, i))
      return parabola_peak(s.two_c2_t[i - 1], y[i - 1], s.two_c2_t[i], y[i], s.two_c2_t[i + 1], y[i + 1]);
  return std::nullopt;
}

PlateauStats plateau_stats(const std::vector<double>& t, const std::vector<double>& y, double begin, double end) {
  if (t.size() != y.size()) throw PreconditionError("plateau_stats: length mismatch");
  double sum = 0.0, sq = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < begin || t[i] > end) continue;
    sum += y[i];
    ++n;
  }
  if (n < 2) throw PreconditionError("plateau_stats: fewer than two samples in the plateau window");
  const double mean = sum / static_cast<double>(n);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= begin && t[i] <= end) sq += (y[i] - mean) * (y[i] - mean);
  return {mean, std::sqrt(sq / static_cast<double>(n))};
}

std::vector<double> detect_revivals(const PopulationSeries& s) {
  const auto& t = s.two_c2_t;
  const auto& y = s.return_probability;
  constexpr double pi = std::numbers::pi;
  if (t.size() != y.size() || t.size() < 3) throw PreconditionError("detect_revivals: series too short");
  if (t.front() > 0.0 + 1e-12 || t.back() < 2.0 * pi - 1e-9)
    throw PreconditionError("detect_revivals: series must cover 2c2t in [0, 2pi]");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] - t[i - 1] > pi / 100.0 + 1e-12)
      throw PreconditionError("detect_revivals: grid too coarse (spacing > pi/100)");

  // The plateau of the return probability is spiky rather than flat, so a
  // peak must also clear the largest plateau value.
  const auto stats = plateau_stats(t, y);
  double plateau_max = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= kPlateauBegin && t[i] <= kPlateauEnd) plateau_max = std::max(plateau_max, y[i]);
  const double threshold = std::max(stats.mean + 3.0 * stats.stddev, plateau_max);

  std::vector<double> out;
  std::size_t i = 0;
  while (i < t.size() && t[i] <= kPlateauEnd) ++i;
  while (i < t.size()) {
    if (!(y[i] > threshold)) {
      ++i;
      continue;
    }
    // one excursion above threshold -> at most one revival
    std::optional<Extremum> best;
    for (; i < t.size() && y[i] > threshold; ++i) {
      if (!is_local_max(y, i)) continue;
      auto p = parabola_peak(t[i - 1], y[i - 1], t[i], y[i], t[i + 1], y[i + 1]);
      if (!best || p.value > best->value) best = p;
    }
    if (best) out.push_back(best->two_c2_t);
  }
  return out;
}

CorrelationReport correlation_report(const FWMScenario& scn) {
  const auto& L = mode_labels();
  const auto nops = number_ops();
  std::array<OperatorExpression, 4> self;
  for (std::size_t i = 0; i < 4; ++i) self[i] = raise(L[i]) * raise(L[i]) * lower(L[i]) * lower(L[i]);
  std::array<OperatorExpression, 6> cross;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      cross[pair_index(i, j)] = raise(L[i]) * raise(L[j]) * lower(L[j]) * lower(L[i]);

  CorrelationReport rep;
  rep.two_c2_t = scn.time_grid;
  rep.points.resize(scn.time_grid.size());
  rep.return_probability.resize(scn.time_grid.size());
  sweep_states(scn, [&](std::size_t k, const fock::StateVector& psi, double overlap) {
    auto& p = rep.points[k];
    rep.return_probability[k] = overlap;
    std::array<bool, 4> defined{};
    for (std::size_t i = 0; i < 4; ++i) {
      p.intensity[i] = fock::expectation(psi, nops[i]).real();
      defined[i] = p.intensity[i] >= kIntensityFloor;
      if (defined[i]) p.g2[i] = fock::expectation(psi, self[i]).real() / (p.intensity[i] * p.intensity[i]);
    }
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) {
        if (!defined[i] || !defined[j]) continue;
        const auto idx = pair_index(i, j);
        const double g = fock::expectation(psi, cross[idx]).real() / (p.intensity[i] * p.intensity[j]);
        p.g2_pair[idx] = g;
        const double classical = *p.g2[i] * *p.g2[j];
        if (classical > 0.0) p.r[idx] = g / std::sqrt(classical);
        const double quantum = (*p.g2[i] + 1.0 / p.intensity[i]) * (*p.g2[j] + 1.0 / p.intensity[j]);
        p.q[idx] = g / std::sqrt(quantum);
      }
    }
  });
  return rep;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{"two_c2_t", "n1",      "nm1",     "n01",    "n02",
                                             "g2_1",     "g2_m1",   "g2_01",   "g2_02",  "g2_1_m1",
                                             "g2_1_01",  "r_1_m1",  "r_1_01",  "q_1_m1"};
  return cols;
}

void write_csv(std::ostream& os, const CorrelationReport& report) {
  write_csv_row(os, csv_columns());
  const auto pm = pair_index(plus1, minus1);
  const auto p0 = pair_index(plus1, zero1);
  for (std::size_t k = 0; k < report.points.size(); ++k) {
    const auto& p = report.points[k];
    std::vector<std::string> row{format_double(report.two_c2_t[k])};
    for (double v : p.intensity) row.push_back(format_double(v));
    for (const auto& g : p.g2) row.push_back(format_cell(g));
    row.push_back(format_cell(p.g2_pair[pm]));
    row.push_back(format_cell(p.g2_pair[p0]));
    row.push_back(format_cell(p.r[pm]));
    row.push_back(format_cell(p.r[p0]));
    row.push_back(format_cell(p.q[pm]));
    write_csv_row(os, row);
  }
}

}  // namespace mwo::fwm
