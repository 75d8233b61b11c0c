// Four-stroke cycle accounting: work/heat/efficiency, the relative-entropy
// efficiency decomposition against entropy-matched thermal references, and
// numerical Carnot-bound / entropy-balance checks.

#pragma once

#include "qotto/passivity.hpp"
#include "qotto/quantum.hpp"

#include <array>
#include <vector>

namespace qotto {

struct CyclePoint {
  char label;  // 'A', 'B', 'C' or 'D'
  Matrix hamiltonian;
  DensityMatrix state;
  double energy;   // Tr[H rho]
  double entropy;  // von Neumann entropy of the state
};

CyclePoint make_cycle_point(char label, Matrix hamiltonian, DensityMatrix state);

// Sign convention: energy flowing into the working fluid is positive.
// eta = -W/Q_h is stored whenever Q_h > 0 and is an efficiency only in the
// engine regime (W < 0, Q_h > 0); otherwise it is the raw ratio.
struct CycleResult {
  double work = 0.0;
  double q_hot = 0.0;
  double q_cold = 0.0;
  double eta = 0.0;  // NaN when q_hot <= 0
  double eta_carnot = 0.0;
  bool engine = false;

  double q_hot_ref = 0.0;   // heats of the entropy-matched reference cycle
  double q_cold_ref = 0.0;
  double rel_entropy_b = 0.0;  // D(rho_B || omega_B)
  double rel_entropy_d = 0.0;  // D(rho_D || omega_D)
  double beta_ref_b = 0.0;
  double beta_ref_d = 0.0;
  double eta_manybody = 0.0;  // infinite-copy cooperative limit

  double first_law_residual = 0.0;  // W + Q_h + Q_c
  std::array<double, 4> energies{};   // at A, B, C, D
  std::array<double, 4> entropies{};  // at A, B, C, D
  double beta_c = 0.0;
  double beta_h = 0.0;
  int copies = 1;
  double tau_total = 0.0;  // summed pulse time of both strokes; 0 for
                           // population-exact modes
  double power = 0.0;      // -W / tau_total convenience value; NaN if
                           // tau_total == 0
};

double work_from_points(const std::array<CyclePoint, 4>& points);
double heat_hot_from_points(const std::array<CyclePoint, 4>& points);
double heat_cold_from_points(const std::array<CyclePoint, 4>& points);

struct EfficiencyDecomposition {
  std::array<double, 4> beta_ref{};     // reference temperatures at A..D
  std::array<double, 4> rel_entropy{};  // D(rho_v || omega_v) at A..D
  double q_hot_ref = 0.0;
  double q_cold_ref = 0.0;
  double eta_closed = 0.0;  // closed form of the geometric sum
  double eta_series = 0.0;  // truncated series (series_terms terms)
  int series_terms = 20;
  bool series_valid = false;  // geometric ratio < 1
  double eta_direct = 0.0;    // 1 - |Q_c|/Q_h from the points
};

/// Rewrites the cycle efficiency in terms of reference heats and relative
/// entropies to the entropy-matched thermal states, and checks the closed
/// form against the direct ratio (agreement within 1e-9 is enforced when
/// Q_h is resolvable). Requires S(rho_B) = S(rho_A) and S(rho_D) = S(rho_C)
/// within 1e-6.
EfficiencyDecomposition efficiency_decomposition(
    const std::array<CyclePoint, 4>& points);

struct SwapCycleCheck {
  double work = 0.0;
  double heat_hot = 0.0;
  double heat_cold = 0.0;
  double eta = 0.0;  // NaN when heat_hot <= 0
  double eta_carnot = 0.0;
  double margin = 0.0;  // eta_carnot - eta, when eta is defined
  bool engine = false;
  bool pass = false;  // Carnot bound respected (vacuous when Q_h <= 0)
};

/// Level-resolved cycle where the isentropic strokes permute thermal
/// populations: work and hot heat are sums over per-level contributions
/// built from the Boltzmann weights at both endpoints. Checks the Carnot
/// bound eta <= 1 - beta_h/beta_c + 1e-12.
SwapCycleCheck carnot_swap_check(const std::vector<double>& energies_a,
                                 const std::vector<double>& energies_b,
                                 const std::vector<int>& permutation,
                                 double beta_c, double beta_h);

struct SecondLawCheck {
  double ds_hot = 0.0;        // S(C) - S(B)
  double ds_cold = 0.0;       // S(A) - S(D)
  double hot_margin = 0.0;    // ds_hot - beta_h Q_h
  double cold_margin = 0.0;   // ds_cold - beta_c Q_c
  double cyclicity = 0.0;     // ds_hot + ds_cold
  bool pass = false;          // both margins >= -1e-9
};

SecondLawCheck second_law_check(const CycleResult& result);
SecondLawCheck second_law_check(const std::array<CyclePoint, 4>& points,
                                const CycleResult& result);

}  // namespace qotto
