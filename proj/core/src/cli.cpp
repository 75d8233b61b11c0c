// Command-line driver and the condensed invariant suite behind `selftest`.

#include "qotto/experiments.hpp"
#include "qotto/spin.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>

namespace qotto {

namespace {

Matrix random_hermitian(std::mt19937_64& rng, int dim, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  return 0.5 * (m + m.adjoint().eval());
}

struct CheckRunner {
  std::ostream& out;
  int failures = 0;
  void run(const std::string& name, const std::function<bool()>& body) {
    bool ok = false;
    std::string detail;
    try {
      ok = body();
    } catch (const std::exception& e) {
      detail = e.what();
    }
    out << fmt::format("selftest: {:<44} {}\n", name, ok ? "ok" : "FAILED");
    if (!ok) {
      ++failures;
      if (!detail.empty()) out << fmt::format("  error: {}\n", detail);
    }
  }
};

bool results_close(const CycleResult& a, const CycleResult& b, double tol) {
  auto close = [tol](double x, double y) {
    if (std::isnan(x) && std::isnan(y)) return true;
    return std::abs(x - y) <= tol;
  };
  bool ok = close(a.work, b.work) && close(a.q_hot, b.q_hot) &&
            close(a.q_cold, b.q_cold) && close(a.eta, b.eta) &&
            close(a.eta_carnot, b.eta_carnot) &&
            close(a.q_hot_ref, b.q_hot_ref) &&
            close(a.q_cold_ref, b.q_cold_ref) &&
            close(a.rel_entropy_b, b.rel_entropy_b) &&
            close(a.rel_entropy_d, b.rel_entropy_d) &&
            close(a.beta_ref_b, b.beta_ref_b) &&
            close(a.beta_ref_d, b.beta_ref_d) &&
            close(a.eta_manybody, b.eta_manybody) && a.engine == b.engine;
  for (int v = 0; v < 4; ++v)
    ok = ok && close(a.energies[v], b.energies[v]) &&
         close(a.entropies[v], b.entropies[v]);
  return ok;
}

}  // namespace

int selftest(std::uint64_t seed, std::ostream& out) {
  CheckRunner checks{out};
  std::mt19937_64 rng(seed);

  checks.run("gibbs entropy identity (random H)", [&] {
    std::uniform_int_distribution<int> dim_dist(2, 9);
    std::uniform_real_distribution<double> beta_dist(0.05, 8.0);
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix h = random_hermitian(rng, dim_dist(rng));
      const double beta = beta_dist(rng);
      const DensityMatrix rho = gibbs_state(h, beta);
      const Spectrum sp = eig_hermitian(h);
      const double e0 = sp.eigenvalues.minCoeff();
      double z = 0.0;
      for (Eigen::Index k = 0; k < sp.eigenvalues.size(); ++k)
        z += std::exp(-beta * (sp.eigenvalues[k] - e0));
      const double expected = beta * (expectation_value(h, rho) - e0) + std::log(z);
      if (std::abs(von_neumann_entropy(rho) - expected) > 1e-10) return false;
    }
    return true;
  });

  checks.run("propagator unitarity and entropy drift", [&] {
    const ExperimentConfig c = preset("fig2ab");
    const HamiltonianSchedule s =
        make_protocol_schedule(c.params, 2, SwapMode::finite_tau, 1.0);
    const DensityMatrix rho = gibbs_state(s.hamiltonian(s.t_a), c.beta_c);
    const PropagationResult prop =
        propagate(rho, [&s](double t) { return s.hamiltonian(t); }, s.t_a,
                  s.t_b, 500);
    return prop.converged && unitarity_error(prop.propagator) < 1e-9 &&
           std::abs(von_neumann_entropy(prop.state) -
                    von_neumann_entropy(rho)) < 1e-8;
  });

  checks.run("first law on presets", [&] {
    for (const std::string& name : preset_names()) {
      const ExperimentConfig c = preset(name);
      for (DiagonalMode mode : {DiagonalMode::qa, DiagonalMode::perfect}) {
        const CycleResult r =
            diagonal_cycle(c.params, c.copies, c.beta_c, c.beta_h, mode);
        if (std::abs(r.first_law_residual) > 1e-10) return false;
      }
    }
    return true;
  });

  checks.run("dense/diagonal cycle equivalence", [&] {
    const ExperimentConfig c = preset("fig2ab");
    for (const std::string mode : {"qa", "perfect"}) {
      const HamiltonianSchedule s = make_protocol_schedule(
          c.params, 2, mode == "qa" ? SwapMode::none : SwapMode::perfect, 1.0);
      const CycleRun dense = run_cycle(s, c.beta_c, c.beta_h, 200);
      const CycleResult diag =
          diagonal_cycle(c.params, 2, c.beta_c, c.beta_h,
                         mode == "qa" ? DiagonalMode::qa : DiagonalMode::perfect);
      if (!results_close(dense.result, diag, 1e-10)) return false;
    }
    return true;
  });

  checks.run("perfect swap equals passivization", [&] {
    for (const std::string& name : preset_names()) {
      const ExperimentConfig c = preset(name);
      for (int copies : {2, 3}) {
        HamiltonianSchedule s;
        s.params = c.params;
        s.copies = copies;
        s.t_ab = 0.0;
        s.t_b = 1.0;
        const Matrix h_b = s.hamiltonian(s.t_b);
        const DensityMatrix rho_a = gibbs_state(s.hamiltonian(s.t_a), c.beta_c);
        const DensityMatrix swapped =
            perfect_swap(rho_a, copies, detect_crossings(s),
                         c.params.energies_final(), false);
        const PassivizationResult passive = make_passive(rho_a, h_b);
        if (std::abs(expectation_value(h_b, swapped) -
                     expectation_value(h_b, passive.passive_state)) > 1e-12)
          return false;
      }
    }
    return true;
  });

  checks.run("randomized permutation cycles respect Carnot", [&] {
    std::uniform_int_distribution<int> dim_dist(2, 27);
    std::uniform_real_distribution<double> energy_dist(0.0, 3.0);
    std::uniform_real_distribution<double> beta_dist(0.1, 8.0);
    for (int trial = 0; trial < 200; ++trial) {
      const int dim = dim_dist(rng);
      std::vector<double> ea(dim), eb(dim);
      for (int k = 0; k < dim; ++k) {
        ea[k] = energy_dist(rng);
        eb[k] = energy_dist(rng);
      }
      double bh = beta_dist(rng), bc = beta_dist(rng);
      if (bh > bc) std::swap(bh, bc);
      if (bh == bc) bc += 0.1;
      std::vector<int> perm(dim);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      if (!carnot_swap_check(ea, eb, perm, bc, bh).pass) return false;
    }
    return true;
  });

  checks.run("second law margins on presets", [&] {
    for (const std::string& name : preset_names()) {
      const ExperimentConfig c = preset(name);
      for (DiagonalMode mode : {DiagonalMode::qa, DiagonalMode::perfect}) {
        const CycleResult r =
            diagonal_cycle(c.params, 3, c.beta_c, c.beta_h, mode);
        const SecondLawCheck law = second_law_check(r);
        if (!law.pass || std::abs(law.cyclicity) > 1e-12) return false;
      }
    }
    return true;
  });

  checks.run("spin block implements the swap", [&] {
    const SpinOperators ops = build_spin_ops(2, true);
    if (max_abs(ops.jminus * ops.jplus - ops.jplus * ops.jminus +
                2.0 * ops.jz) > 1e-12)
      return false;
    const Matrix s = swap_unitary(ops);
    for (int level = 0; level < 9; ++level) {
      RealVector pops = RealVector::Zero(9);
      pops[level] = 1.0;
      const Matrix rho = s * DensityMatrix::diagonal(pops).matrix() * s.adjoint();
      const int expected = level == 4 ? 2 : (level == 2 ? 4 : level);
      if (std::abs(rho(expected, expected).real() - 1.0) > 1e-10) return false;
    }
    return true;
  });

  checks.run("ergotropy nonnegative, zero iff passive", [&] {
    std::uniform_int_distribution<int> dim_dist(2, 9);
    for (int trial = 0; trial < 100; ++trial) {
      const int dim = dim_dist(rng);
      const Matrix h = random_hermitian(rng, dim);
      const Spectrum sp = eig_hermitian(h);
      RealVector pops(dim);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      double z = 0.0;
      for (int k = 0; k < dim; ++k) {
        pops[k] = u(rng) + 1e-6;
        z += pops[k];
      }
      pops /= z;
      const Matrix rho_m = sp.eigenvectors * pops.cast<Complex>().asDiagonal() *
                           sp.eigenvectors.adjoint();
      const DensityMatrix rho = DensityMatrix::unchecked(rho_m);
      const PassivizationResult res = make_passive(rho, h);
      if (res.ergotropy < -1e-12) return false;
      const bool passive = is_passive(rho, h, 1e-10);
      if (passive != (res.ergotropy <= 1e-12)) return false;
    }
    return true;
  });

  out << fmt::format("selftest: {} failure(s)\n", checks.failures);
  return checks.failures;
}

namespace {

int emit_table(const Table& table, const ExperimentConfig& config,
               std::ostream& out, std::ostream& err) {
  for (const auto& [row, note] : table.row_notes)
    err << fmt::format("row {}: {}\n", row, note);
  if (config.out.empty()) {
    if (config.format == "json")
      write_json(table, out);
    else
      write_csv(table, out);
    return 0;
  }
  std::ofstream file(config.out, std::ios::binary);
  if (!file)
    throw std::invalid_argument(
        fmt::format("cannot open output file '{}'", config.out));
  if (config.format == "json")
    write_json(table, file);
  else
    write_csv(table, file);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Cooperative many-copy quantum Otto cycle simulator"};
  app.require_subcommand(1);

  std::string preset_name, config_path, out_path, format;
  int copies = 0, steps = 0, workers = -1, n_min = 0, n_max = 0, tau_points = 0;
  double tau = 0.0, tau_min = 0.0, tau_max = 0.0;
  std::string mode;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub, bool physics = true) {
    if (physics) {
      sub->add_option("--preset", preset_name, "named parameter set: fig2ab|fig2d|fig3");
      sub->add_option("--config", config_path, "JSON config file");
    }
    sub->add_option("--out", out_path, "output file (default: stdout)");
    sub->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--workers", workers, "worker threads (QOTTO_WORKERS overrides)");
    sub->add_option("--seed", seed, "seed for randomized sweeps");
  };

  CLI::App* cmd_run = app.add_subcommand("run-cycle", "run one cycle and report its record");
  add_common(cmd_run);
  cmd_run->add_option("--copies", copies, "number of working-fluid copies");
  cmd_run->add_option("--mode", mode, "qa|perfect|finite");
  cmd_run->add_option("--tau", tau, "pulse duration for finite mode");
  cmd_run->add_option("--steps", steps, "integrator steps per stroke");

  CLI::App* cmd_tau = app.add_subcommand("sweep-tau", "finite-tau sweep on the dense path");
  add_common(cmd_tau);
  cmd_tau->add_option("--copies", copies, "2 or 3 copies");
  cmd_tau->add_option("--tau-min", tau_min, "grid start");
  cmd_tau->add_option("--tau-max", tau_max, "grid end");
  cmd_tau->add_option("--tau-points", tau_points, "grid size");
  cmd_tau->add_option("--steps", steps, "integrator steps per stroke");

  CLI::App* cmd_n = app.add_subcommand("sweep-n", "copy-number sweep on the diagonal path");
  add_common(cmd_n);
  cmd_n->add_option("--n-min", n_min, "smallest copy number");
  cmd_n->add_option("--n-max", n_max, "largest copy number");
  cmd_n->add_option("--mode", mode, "qa|perfect");

  CLI::App* cmd_limit = app.add_subcommand("limit", "many-body efficiency limit");
  add_common(cmd_limit);

  CLI::App* cmd_cross = app.add_subcommand("crossings", "collective level crossings of the ramp");
  add_common(cmd_cross);
  cmd_cross->add_option("--copies", copies, "number of copies");

  CLI::App* cmd_self = app.add_subcommand("selftest", "run the invariant suite");
  add_common(cmd_self, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << fmt::format("{}\n", e.what());
    return 1;
  }

  try {
    ExperimentConfig config;
    const bool is_selftest = cmd_self->parsed();
    if (!is_selftest) {
      if (!preset_name.empty() && !config_path.empty())
        throw std::invalid_argument("--preset and --config are exclusive");
      if (!preset_name.empty()) {
        config = preset(preset_name);
      } else if (!config_path.empty()) {
        std::ifstream file(config_path);
        if (!file)
          throw std::invalid_argument(
              fmt::format("cannot read config file '{}'", config_path));
        std::ostringstream text;
        text << file.rdbuf();
        config = config_from_json_text(text.str());
      } else {
        throw std::invalid_argument("one of --preset or --config is required");
      }
    }
    CLI::App* active = app.get_subcommands().front();
    auto given = [&](const std::string& name) {
      const CLI::Option* opt = active->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    if (given("--copies")) config.copies = copies;
    if (given("--mode")) config.mode = mode;
    if (given("--tau")) config.tau = tau;
    if (given("--steps")) config.steps = steps;
    if (given("--workers")) config.workers = workers;
    if (given("--seed")) config.seed = seed;
    if (given("--n-min")) config.n_min = n_min;
    if (given("--n-max")) config.n_max = n_max;
    if (given("--tau-min")) config.tau_min = tau_min;
    if (given("--tau-max")) config.tau_max = tau_max;
    if (given("--tau-points")) config.tau_points = tau_points;
    if (given("--out")) config.out = out_path;
    if (given("--format")) config.format = format;

    auto warn_multi_pair = [&] {
      if (config.mode != "finite") return;
      HamiltonianSchedule probe;
      probe.params = config.params;
      probe.copies = config.copies;
      if (detect_crossings(probe).size() > 1)
        err << "note: several crossing groups share one pulse window; "
               "multi-pair finite-tau coupling is experimental\n";
    };
    if (cmd_run->parsed()) {
      warn_multi_pair();
      return emit_table(run_cycle_table(config), config, out, err);
    }
    if (cmd_tau->parsed()) {
      config.mode = "finite";  // the sweep axis is the pulse duration
      warn_multi_pair();
      return emit_table(sweep_tau(config), config, out, err);
    }
    if (cmd_n->parsed()) {
      if (config.mode == "finite") config.mode = "perfect";
      return emit_table(sweep_copies(config), config, out, err);
    }
    if (cmd_limit->parsed()) return emit_table(limit_table(config), config, out, err);
    if (cmd_cross->parsed()) return emit_table(crossings_table(config), config, out, err);
    if (is_selftest) return selftest(config.seed, out) == 0 ? 0 : 1;
    throw std::invalid_argument("no subcommand selected");
  } catch (const NonConvergenceError& e) {
    err << fmt::format("non-convergence: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    err << fmt::format("error: {}\n", e.what());
    return 1;
  }
}

}  // namespace qotto
