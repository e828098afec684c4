#include "mwo/fock/dynamics.hpp"

#include <cmath>

#include "mwo/error.hpp"

namespace mwo::fock {

namespace {

struct ResolvedFactor {
  std::size_t mode;
  Ladder kind;
};

std::vector<ResolvedFactor> resolve(const Term& term, const ModeSet& modes) {
  std::vector<ResolvedFactor> out;
  out.reserve(term.factors.size());
  for (const auto& f : term.factors) out.push_back({modes.index_of(f.mode), f.kind});
  return out;
}

// Applies the monomial (right to left) to |occ>; returns the amplitude and
// overwrites occ with the image. Zero when a lowering hits an empty mode.
// The integer ladder factors are multiplied first and rooted once, so
// diagonal elements such as <n|a^+ a|n> come out as exact integers.
double apply_monomial(const std::vector<ResolvedFactor>& factors, Occupation& occ) {
  double product = 1.0;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    int& n = occ[it->mode];
    if (it->kind == Ladder::lower) {
      if (n == 0) return 0.0;
      product *= static_cast<double>(n);
      --n;
    } else {
      ++n;
      product *= static_cast<double>(n);
    }
  }
  return std::sqrt(product);
}

}  // namespace

SparseMatrix build_matrix(const OperatorExpression& expr, const FockSector& sector) {
  const auto dim = static_cast<Eigen::Index>(sector.dimension());
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (const auto& term : expr.terms()) {
    if (term.coefficient == Complex{}) continue;
    const auto factors = resolve(term, sector.modes());
    for (std::size_t col = 0; col < sector.dimension(); ++col) {
      Occupation occ = sector.state(col);
      const double amp = apply_monomial(factors, occ);
      if (amp == 0.0) continue;
      if (auto row = sector.find(occ)) {
        triplets.emplace_back(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col), term.coefficient * amp);
        continue;
      }
      if (sector.max_occupation() && sector.satisfies_rules(occ)) continue;  // truncated
      throw PreconditionError("charge violation: term " + to_string(term) + " leaves the sector");
    }
  }
  SparseMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

double max_abs(const DenseMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const SparseMatrix& m) {
  const SparseMatrix diff = m - SparseMatrix(m.adjoint());
  double worst = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

SpectralDecomposition diagonalize(const DenseMatrix& h, const Tolerances& tol) {
  if (h.rows() != h.cols()) throw PreconditionError("diagonalize: matrix is not square");
  const double scale = std::max(1.0, max_abs(h));
  const double defect = max_abs(h - h.adjoint());
  if (defect > tol.hermiticity * scale)
    throw PreconditionError("diagonalize: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("diagonalize: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

SpectralDecomposition diagonalize(const SparseMatrix& h, const Tolerances& tol) {
  return diagonalize(DenseMatrix(h), tol);
}

StateVector::StateVector(std::shared_ptr<const FockSector> sector, Vector amplitudes, const Tolerances& tol)
    : sector_(std::move(sector)), amplitudes_(std::move(amplitudes)) {
  if (!sector_) throw PreconditionError("state vector needs a sector");
  if (amplitudes_.size() != static_cast<Eigen::Index>(sector_->dimension()))
    throw PreconditionError("state vector length " + std::to_string(amplitudes_.size()) + " != sector dimension " +
                            std::to_string(sector_->dimension()));
  if (std::abs(amplitudes_.norm() - 1.0) > tol.norm) throw PreconditionError("state vector is not normalized");
}

StateVector StateVector::basis(std::shared_ptr<const FockSector> sector, const Occupation& occupation) {
  if (!sector) throw PreconditionError("state vector needs a sector");
  auto idx = sector->find(occupation);
  if (!idx) throw PreconditionError("occupation tuple is not in the sector");
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(sector->dimension()));
  amps(static_cast<Eigen::Index>(*idx)) = 1.0;
  return StateVector(std::move(sector), std::move(amps));
}

StateVector StateVector::normalized(std::shared_ptr<const FockSector> sector, Vector amplitudes) {
  const double n = amplitudes.norm();
  if (n == 0.0) throw PreconditionError("cannot normalize a zero vector");
  amplitudes /= n;
  return StateVector(std::move(sector), std::move(amplitudes));
}

Complex StateVector::amplitude(const Occupation& occupation) const {
  auto idx = sector_->find(occupation);
  return idx ? amplitudes_(static_cast<Eigen::Index>(*idx)) : Complex{};
}

StateVector evolve(const StateVector& psi0, const SpectralDecomposition& spec, double t, double hbar,
                   const Tolerances& tol) {
  if (spec.eigenvectors.rows() != static_cast<Eigen::Index>(psi0.dimension()))
    throw PreconditionError("evolve: dimension mismatch between state and decomposition");
  if (hbar <= 0.0) throw PreconditionError("evolve: hbar must be positive");
  if (t == 0.0) return psi0;  // exact, no round trip through the eigenbasis
  Vector c = spec.eigenvectors.adjoint() * psi0.amplitudes();
  for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::polar(1.0, -spec.eigenvalues(k) * t / hbar);
  Vector out = spec.eigenvectors * c;
  if (std::abs(out.norm() - 1.0) > tol.norm) throw NumericalError("evolve: norm drift exceeds tolerance");
  return StateVector(psi0.sector_ptr(), std::move(out), tol);
}

Complex expectation(const StateVector& psi, const OperatorExpression& expr) {
  const auto& sector = psi.sector();
  const auto& amps = psi.amplitudes();
  Complex total{};
  for (const auto& term : expr.terms()) {
    if (term.coefficient == Complex{}) continue;
    const auto factors = resolve(term, sector.modes());
    Complex acc{};
    for (std::size_t col = 0; col < sector.dimension(); ++col) {
      const Complex a = amps(static_cast<Eigen::Index>(col));
      if (a == Complex{}) continue;
      Occupation occ = sector.state(col);
      const double amp = apply_monomial(factors, occ);
      if (amp == 0.0) continue;
      if (auto row = sector.find(occ)) acc += std::conj(amps(static_cast<Eigen::Index>(*row))) * amp * a;
    }
    total += term.coefficient * acc;
  }
  return total;
}

Complex expectation(const StateVector& psi, const SparseMatrix& op) {
  if (op.rows() != static_cast<Eigen::Index>(psi.dimension()))
    throw PreconditionError("expectation: operator dimension mismatch");
  return psi.amplitudes().dot(op * psi.amplitudes());
}

}  // namespace mwo::fock
