// Qubit realization of the qutrit protocol: collective spin operators built
// from Pauli sums, the symmetric-subspace projection that turns two qubits
// into a qutrit, the diagonal quench Hamiltonian and the two-qutrit swap
// unitary.

#pragma once

#include "qotto/quantum.hpp"

namespace qotto {

struct SpinOperators {
  Matrix jz;
  Matrix jplus;
  Matrix jminus;
  int n_qubits = 0;
  bool projected = false;  // restricted to the maximal-spin block
  Eigen::Index dim() const { return jz.rows(); }
};

/// Isometry from the (n+1)-dimensional maximal-spin block into the 2^n
/// qubit space; columns ordered by ascending Jz eigenvalue m = -n/2 .. n/2.
Matrix symmetric_isometry(int n_qubits);

/// Collective spin operators Jz = (1/2) sum sigma_z^i, J+- = sum sigma+-^i
/// on n qubits, optionally projected to the symmetric subspace. Dense guard
/// above ten qubits.
SpinOperators build_spin_ops(int n_qubits, bool project_symmetric);

/// Omega [Jz + b (Jz^2 - 1)]: moves only the m = 0 level of a spin-1 block
/// and commutes with itself for every b, so any ramp of b is
/// population-preserving.
Matrix quench_hamiltonian(const SpinOperators& ops, double omega, double b);

/// Two-block quench on a pair of identical spin systems.
Matrix quench_hamiltonian_pair(const SpinOperators& ops, double omega, double b);

/// exp(-i pi H_sw) on two spin-1 blocks: exchanges the populations of
/// |m1=0, m2=0> and |m1=-1, m2=+1> and acts as the identity on the other
/// product levels (up to phases).
Matrix swap_unitary(const SpinOperators& ops);

/// Largest matrix element of S outside the symmetric x symmetric sector
/// when S is built from unprojected pair operators; reported, not
/// constrained (the swap acts nontrivially there).
double off_sector_action(const Matrix& s, const Matrix& isometry_pair);

}  // namespace qotto
