// Reproduction harness: named parameter presets, tau sweeps, copy-number
// sweeps, the many-body limit, CSV/JSON emission and the command-line
// driver.

#pragma once

#include "qotto/protocol.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace qotto {

struct ExperimentConfig {
  QutritParams params;
  double beta_c = 6.66;
  double beta_h = 3.28;
  int copies = 2;
  int n_min = 1;
  int n_max = 10;
  double tau = 1.0;
  double tau_min = 1e-3;
  double tau_max = 1e3;
  int tau_points = 61;
  std::string mode = "finite";  // qa | perfect | finite
  int steps = 2000;
  std::uint64_t seed = 12345;
  int workers = 0;  // 0: hardware concurrency; QOTTO_WORKERS overrides
  std::string out;  // empty: stdout
  std::string format = "csv";
  std::string preset_name;

  void validate() const;
  SwapMode swap_mode() const;
  DiagonalMode diagonal_mode() const;
};

/// Named parameter sets: fig2ab, fig2d, fig3.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// Strict JSON config: unknown keys are rejected. A "preset" key seeds the
/// defaults, every other key overrides one ExperimentConfig field.
ExperimentConfig config_from_json_text(const std::string& text);

struct Cell {
  enum class Kind { number, integer, text };
  Kind kind = Kind::number;
  double number_value = 0.0;
  long long integer_value = 0;
  std::string text_value;

  static Cell number(double v);
  static Cell integer(long long v);
  static Cell text(std::string v);
  std::string formatted() const;  // numbers carry 12 significant digits
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::size_t, std::string>> row_notes;  // failures
};

void write_csv(const Table& table, std::ostream& out);
void write_json(const Table& table, std::ostream& out);

/// Finite-tau cycles over a logarithmic tau grid (dense path, 2 or 3
/// copies). Columns: tau, p_n_B, p_m_B, delta_E_B, W, Q_h, Q_c, eta,
/// eta_over_carnot. Failed rows carry NaNs and a note.
Table sweep_tau(const ExperimentConfig& config);

/// Copy-number sweep on the diagonal fast path (qa or perfect mode).
/// Columns: N, W, W_per_copy, Q_h, Q_c, eta, eta_over_carnot, eta_manybody,
/// D_B_over_betaQ.
Table sweep_copies(const ExperimentConfig& config);

Table run_cycle_table(const ExperimentConfig& config);
Table limit_table(const ExperimentConfig& config);
Table crossings_table(const ExperimentConfig& config);

/// Condensed invariant suite; prints one line per check, returns the number
/// of failures.
int selftest(std::uint64_t seed, std::ostream& out);

/// Command-line driver. Subcommands: run-cycle, sweep-tau, sweep-n, limit,
/// crossings, selftest. Exit status 0 on success, 1 on validation errors,
/// 2 on numerical non-convergence.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace qotto
