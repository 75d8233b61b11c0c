// The concrete many-copy qutrit protocol: single-copy Hamiltonian with a
// linearly ramped middle level, collective Hamiltonian with swap coupling
// pulses, collective-crossing detection, population-exact perfect swaps, the
// dense cycle driver and a 3^N diagonal fast path.

#pragma once

#include "qotto/cycle.hpp"

#include <array>
#include <string>
#include <vector>

namespace qotto {

struct QutritParams {
  double e0 = 0.0;
  double e1_initial = 1.0 / 3.0;
  double e1_shift = 1.0 / 3.0;
  double e2 = 1.0;

  /// Enforces e0 < e1(t) < e2 over the whole ramp.
  void validate() const;
  double e1_final() const { return e1_initial + e1_shift; }
  std::array<double, 3> energies_initial() const { return {e0, e1_initial, e2}; }
  std::array<double, 3> energies_final() const { return {e0, e1_final(), e2}; }
};

enum class SwapMode { none, finite_tau, perfect };

struct SwapSpec {
  std::vector<int> word_n;  // length-N words over {0,1,2}
  std::vector<int> word_m;
  double tau = 1.0;         // pulse duration; ignored in perfect mode
  SwapMode mode = SwapMode::finite_tau;
};

struct HamiltonianSchedule {
  QutritParams params;
  int copies = 1;
  double t_a = 0.0;   // ramp start
  double t_ab = 0.0;  // ramp end / pulse start (ramp collapsed by default)
  double t_b = 1.0;   // pulse end
  std::vector<SwapSpec> swaps;
  bool mirrored = false;  // evaluate at t_a + t_b - t (reversed stroke)

  void validate() const;
  double e1_at(double t) const;
  /// Pulse envelope f(t) = (pi^2 / 4 tau) sin(pi (t - t_ab)/tau) inside
  /// the window, exactly zero outside; integral over the window is pi/2.
  double pulse_amplitude(double t) const;
  std::array<double, 3> single_energies(double t) const;
  /// Dense collective Hamiltonian; refused above three copies.
  Matrix hamiltonian(double t) const;
  HamiltonianSchedule reversed() const;
  SwapMode effective_mode() const;  // mixing finite and perfect is rejected
};

/// Forwards to schedule.hamiltonian(t).
Matrix collective_hamiltonian(const HamiltonianSchedule& schedule, double t);

/// Builds the standard protocol schedule: instantaneous ramp (the ramp
/// substroke moves no population at any speed), pulse window [0, tau], one
/// swap pair per collective crossing group (lexicographically smallest
/// member words).
HamiltonianSchedule make_protocol_schedule(const QutritParams& params,
                                           int copies, SwapMode mode,
                                           double tau);

// Basis helpers; basis index reads the copy word most-significant-first.
int word_index(const std::vector<int>& word);
std::vector<int> word_of_index(long index, int copies);
std::array<int, 3> composition_of_index(long index, int copies);
long pow3(int n);
std::vector<long> words_of_composition(int copies, const std::array<int, 3>& comp);
std::string word_label(const std::vector<int>& word);

struct CrossingGroup {
  std::array<int, 3> comp_n;  // lower additive energy at the ramp start
  std::array<int, 3> comp_m;
  double crossing_e1;    // middle-level energy where the pair is degenerate
  double crossing_time;  // linear interpolation along the ramp
  long multiplicity_n;
  long multiplicity_m;
};

/// All composition pairs whose additive collective energies change order
/// during the ramp (strict sign change; tangential contacts excluded),
/// sorted in the order the ramp passes them. Pairs related by copy
/// permutation form one group.
std::vector<CrossingGroup> detect_crossings(const HamiltonianSchedule& schedule);

/// Population permutation of a perfect swap at each crossing: processes the
/// groups in ramp order, redistributing populations inside each crossed
/// group so they are non-increasing with the stroke-end energies
/// (passivization restricted to the group).
void apply_perfect_swaps(std::vector<double>& populations, int copies,
                         const std::vector<CrossingGroup>& groups,
                         const std::array<double, 3>& single_energies_end,
                         bool reverse_ramp);

/// Dense form of the perfect swap; the state must be diagonal in the
/// collective product basis.
DensityMatrix perfect_swap(const DensityMatrix& rho_diagonal, int copies,
                           const std::vector<CrossingGroup>& groups,
                           const std::array<double, 3>& single_energies_end,
                           bool reverse_ramp);

struct CycleRun {
  std::array<CyclePoint, 4> points;
  CycleResult result;
};

/// Dense four-stroke cycle: thermalize at A (beta_c), propagate the
/// schedule A->B, thermalize at C (beta_h), propagate the time-mirrored
/// schedule C->D. Perfect-mode swaps are applied as exact population
/// permutations instead of pulse integration.
CycleRun run_cycle(const HamiltonianSchedule& schedule, double beta_c,
                   double beta_h, int steps = 2000);

enum class DiagonalMode { qa, perfect };

/// Whole cycle on the 3^N population vector: thermal populations are
/// products of single-copy Boltzmann factors, the ramp carries populations
/// unchanged, perfect mode applies the crossing permutations. Matches the
/// dense path within 1e-10 for N <= 3. Guarded above N = 13.
CycleResult diagonal_cycle(const QutritParams& params, int copies,
                           double beta_c, double beta_h, DiagonalMode mode);

struct ManyBodyLimit {
  double value = 0.0;  // 1 + Q_c_ref / Q_h_ref, per-copy reference heats
  double beta_ref_b = 0.0;
  double beta_ref_d = 0.0;
  double q_hot_ref_per_copy = 0.0;
  double q_cold_ref_per_copy = 0.0;
  bool engine_at_reference = false;
  bool degenerate = false;  // vanishing reference heats (e.g. equal baths
                            // with no ramp); value reported as 0
};

/// Infinite-copy cooperative efficiency limit. Reference temperatures and
/// heats are extensive, so a single copy fixes the ratio.
ManyBodyLimit many_body_limit(const QutritParams& params, double beta_c,
                              double beta_h);

}  // namespace qotto
