#pragma once

#include <vector>

#include "mwo/fock/operator_expression.hpp"
#include "mwo/pamp/parametric_amp.hpp"

namespace mwo::pamp {

// Modes "a", "cp", "cm". H / (hbar omega_r) for the three-mode amplifier.
fock::OperatorExpression three_mode_hamiltonian(const ThreeModeParams& p);

// M read off the normal-ordered commutators [w_i, H] for w = (a, c+, c-^+).
Matrix3 drift_from_symbolic_commutators(const ThreeModeParams& p);

// M fitted from the matrices of [w_i, H] on a box of `cap` quanta per mode,
// using only elements between states at least two quanta below the cap.
Matrix3 drift_from_truncated_commutators(const ThreeModeParams& p, int cap = 4);

// Vacuum start, evolved in the sector n_a + n+ - n- = 0 with `cutoff` quanta
// per mode. Refuses (PreconditionError) when any mean occupation exceeds
// cutoff / 10 at a requested time.
std::vector<ThreeModeCorrelations> fock_oracle_vacuum(const ThreeModeParams& p, const std::vector<double>& grid,
                                                      int cutoff = 30);

}  // namespace mwo::pamp
