#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>

#include "mwo/fock/basis.hpp"
#include "mwo/fock/operator_expression.hpp"

namespace mwo::fock {

using SparseMatrix = Eigen::SparseMatrix<Complex>;
using DenseMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct Tolerances {
  double hermiticity = 1e-10;
  double norm = 1e-10;
};

// Matrix of `expr` on the sector basis, using a^+|n> = sqrt(n+1)|n+1> and
// a|n> = sqrt(n)|n-1>. A transition to a tuple that breaks a charge rule is a
// "charge violation" and throws, naming the term. On a capped sector,
// transitions past the cap that respect the rules are truncated.
SparseMatrix build_matrix(const OperatorExpression& expr, const FockSector& sector);

double max_abs(const DenseMatrix& m);
double hermiticity_defect(const SparseMatrix& m);

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;  // ascending
  DenseMatrix eigenvectors;     // columns
};

// Dense Hermitian eigendecomposition. Throws PreconditionError if
// ||H - H^+||_max exceeds tol.hermiticity * max(1, ||H||_max).
SpectralDecomposition diagonalize(const DenseMatrix& h, const Tolerances& tol = {});
SpectralDecomposition diagonalize(const SparseMatrix& h, const Tolerances& tol = {});

// Unit-norm amplitudes over a shared, immutable sector.
class StateVector {
 public:
  StateVector(std::shared_ptr<const FockSector> sector, Vector amplitudes, const Tolerances& tol = {});

  static StateVector basis(std::shared_ptr<const FockSector> sector, const Occupation& occupation);
  static StateVector normalized(std::shared_ptr<const FockSector> sector, Vector amplitudes);

  const FockSector& sector() const { return *sector_; }
  const std::shared_ptr<const FockSector>& sector_ptr() const { return sector_; }
  const Vector& amplitudes() const { return amplitudes_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }

  Complex amplitude(const Occupation& occupation) const;

 private:
  std::shared_ptr<const FockSector> sector_;
  Vector amplitudes_;
};

// psi(t) = U exp(-i E t / hbar) U^+ psi0. Throws NumericalError if the norm
// drifts by more than tol.norm.
StateVector evolve(const StateVector& psi0, const SpectralDecomposition& spec, double t, double hbar = 1.0,
                   const Tolerances& tol = {});

// <psi|expr|psi>. Terms leaving the sector contribute zero.
Complex expectation(const StateVector& psi, const OperatorExpression& expr);

// Same, with an explicit matrix (e.g. one already built for the sector).
Complex expectation(const StateVector& psi, const SparseMatrix& op);

}  // namespace mwo::fock
