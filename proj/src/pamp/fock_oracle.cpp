#include "mwo/pamp/fock_oracle.hpp"

#include <memory>

#include "mwo/error.hpp"
#include "mwo/fock/dynamics.hpp"

namespace mwo::pamp {

using fock::lower;
using fock::number;
using fock::OperatorExpression;
using fock::raise;

namespace {

const std::vector<std::string>& labels() {
  static const std::vector<std::string> l{"a", "cp", "cm"};
  return l;
}

// w = (a, c+, c-^+)
std::array<OperatorExpression, 3> w_ops() { return {lower("a"), lower("cp"), raise("cm")}; }

}  // namespace

OperatorExpression three_mode_hamiltonian(const ThreeModeParams& p) {
  return number("cp") + number("cm") - p.delta * number("a") +
         p.chi * (raise("a") * raise("cm") + raise("a") * lower("cp") + raise("cp") * lower("a") + lower("cm") * lower("a"));
}

Matrix3 drift_from_symbolic_commutators(const ThreeModeParams& p) {
  const auto h = three_mode_hamiltonian(p);
  const auto w = w_ops();
  Matrix3 m = Matrix3::Zero();
  for (std::size_t i = 0; i < 3; ++i) {
    // i dw/dt = [w, H]
    const auto c = fock::canonicalize(fock::commutator(w[i], h));
    for (const auto& t : c.terms()) {
      if (t.factors.size() != 1) throw NumericalError("drift: commutator is not linear in the modes");
      const auto& f = t.factors.front();
      int j = -1;
      if (f.mode == "a" && f.kind == fock::Ladder::lower) j = 0;
      if (f.mode == "cp" && f.kind == fock::Ladder::lower) j = 1;
      if (f.mode == "cm" && f.kind == fock::Ladder::raise) j = 2;
      if (j < 0) throw NumericalError("drift: commutator leaves the span of (a, c+, c-^+)");
      m(static_cast<Eigen::Index>(i), j) += t.coefficient;
    }
  }
  return m;
}

Matrix3 drift_from_truncated_commutators(const ThreeModeParams& p, int cap) {
  if (cap < 3) throw PreconditionError("drift: cap must be at least 3");
  auto box = fock::enumerate_sector(fock::ModeSet(labels()), {}, cap);
  const fock::DenseMatrix h(fock::build_matrix(three_mode_hamiltonian(p), box));
  const auto w = w_ops();
  std::array<fock::DenseMatrix, 3> wm;
  for (std::size_t j = 0; j < 3; ++j) wm[j] = fock::DenseMatrix(fock::build_matrix(w[j], box));

  // interior elements only: truncation corrupts the products at the edge
  std::vector<std::pair<Eigen::Index, Eigen::Index>> cells;
  const auto n = static_cast<Eigen::Index>(box.dimension());
  auto interior = [&](Eigen::Index k) {
    for (int v : box.state(static_cast<std::size_t>(k)))
      if (v > cap - 2) return false;
    return true;
  };
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      if (interior(r) && interior(c)) cells.emplace_back(r, c);

  Matrix3 m;
  for (std::size_t i = 0; i < 3; ++i) {
    const fock::DenseMatrix comm = wm[i] * h - h * wm[i];
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(cells.size()), 3);
    Eigen::VectorXcd b(static_cast<Eigen::Index>(cells.size()));
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const auto [r, c] = cells[k];
      for (int j = 0; j < 3; ++j) a(static_cast<Eigen::Index>(k), j) = wm[static_cast<std::size_t>(j)](r, c);
      b(static_cast<Eigen::Index>(k)) = comm(r, c);
    }
    const Eigen::Vector3cd x = a.colPivHouseholderQr().solve(b);
    if ((a * x - b).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, b.cwiseAbs().maxCoeff()))
      throw NumericalError("drift: commutator is not a linear combination of (a, c+, c-^+)");
    m.row(static_cast<Eigen::Index>(i)) = x.transpose();
  }
  return m;
}

std::vector<ThreeModeCorrelations> fock_oracle_vacuum(const ThreeModeParams& p, const std::vector<double>& grid,
                                                      int cutoff) {
  p.validate();
  if (cutoff < 10) throw PreconditionError("fock oracle: cutoff must be at least 10");
  auto sector = std::make_shared<const fock::FockSector>(
      fock::enumerate_sector(fock::ModeSet(labels()), {{{1, 1, -1}, 0}}, cutoff));
  const auto spec = fock::diagonalize(fock::build_matrix(three_mode_hamiltonian(p), *sector));
  const auto psi0 = fock::StateVector::basis(sector, {0, 0, 0});

  // index order of labels matches Mode: a, plus, minus
  std::array<OperatorExpression, 3> n_ops, self_ops, pair_ops;
  const auto& L = labels();
  for (std::size_t i = 0; i < 3; ++i) {
    n_ops[i] = number(L[i]);
    self_ops[i] = raise(L[i]) * raise(L[i]) * lower(L[i]) * lower(L[i]);
  }
  for (std::size_t k = 0; k < 3; ++k) {
    const auto [i, j] = kPairs[k];
    pair_ops[k] = raise(L[i]) * raise(L[j]) * lower(L[j]) * lower(L[i]);
  }

  std::vector<ThreeModeCorrelations> out;
  for (double tau : grid) {
    const auto psi = fock::evolve(psi0, spec, tau);
    std::array<double, 3> inten{}, self{}, pair{};
    for (std::size_t i = 0; i < 3; ++i) {
      inten[i] = fock::expectation(psi, n_ops[i]).real();
      if (inten[i] > cutoff / 10.0)
        throw PreconditionError("fock oracle: mean occupation exceeds cutoff/10; truncation would bias the comparison");
      self[i] = fock::expectation(psi, self_ops[i]).real();
    }
    for (std::size_t k = 0; k < 3; ++k) pair[k] = fock::expectation(psi, pair_ops[k]).real();
    out.push_back(assemble_correlations(inten, self, pair, kPampIntensityFloor));
  }
  return out;
}

}  // namespace mwo::pamp
