// Passive-state construction, ergotropy, entropy-matched thermal reference
// states and quantum relative entropy.

#pragma once

#include "qotto/quantum.hpp"

#include <string>
#include <vector>

namespace qotto {

struct PassivizationResult {
  DensityMatrix passive_state;
  // permutation[k] = source level whose population lands on the k-th
  // lowest energy level (ties in population keep their original order)
  std::vector<Eigen::Index> permutation;
  double ergotropy;  // Tr[H rho] - Tr[H rho_passive] >= 0
};

/// Reorders the populations of a state diagonal in the eigenbasis of h so
/// they are non-increasing with energy. Input with off-diagonal weight
/// above 1e-10 in that basis is rejected.
PassivizationResult make_passive(const DensityMatrix& rho, const Matrix& h);

/// True iff [rho, H] vanishes within tolerance and populations are
/// non-increasing with energy (slack `tolerance`); levels inside a
/// degenerate shell compare as equal.
bool is_passive(const DensityMatrix& rho, const Matrix& h, double tolerance);

struct ThermalReference {
  double beta_ref;
  DensityMatrix omega;
  std::string hamiltonian_tag;
};

/// Solves S(gibbs(h, beta)) = entropy_target for beta by bracket doubling
/// plus bisection; S is strictly decreasing in beta. Targets outside
/// (ln g0, ln dim] are rejected, g0 being the ground-space degeneracy.
ThermalReference reference_temperature(const Matrix& h, double entropy_target,
                                       std::string hamiltonian_tag = {});

/// Tr[rho ln rho - rho ln omega], computed spectrally. Returns +infinity
/// when rho has weight outside the support of omega.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& omega);

}  // namespace qotto
