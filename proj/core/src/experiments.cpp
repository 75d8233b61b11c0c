#include "qotto/experiments.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace qotto {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

void ExperimentConfig::validate() const {
  params.validate();
  if (!(beta_c > beta_h) || !(beta_h > 0.0))
    throw std::invalid_argument(fmt::format(
        "config: need beta_c > beta_h > 0, got beta_c = {}, beta_h = {}",
        beta_c, beta_h));
  if (copies < 1) throw std::invalid_argument("config: copies must be >= 1");
  if (n_min < 1 || n_max < n_min)
    throw std::invalid_argument("config: need 1 <= n_min <= n_max");
  if (!(tau > 0.0) || !(tau_min > 0.0) || !(tau_max >= tau_min))
    throw std::invalid_argument("config: tau grid must be strictly positive");
  if (tau_points < 1) throw std::invalid_argument("config: tau_points >= 1");
  if (steps < 1) throw std::invalid_argument("config: steps must be >= 1");
  if (mode != "qa" && mode != "perfect" && mode != "finite")
    throw std::invalid_argument(
        fmt::format("config: unknown mode '{}' (qa|perfect|finite)", mode));
  if (format != "csv" && format != "json")
    throw std::invalid_argument(
        fmt::format("config: unknown format '{}' (csv|json)", format));
}

SwapMode ExperimentConfig::swap_mode() const {
  if (mode == "qa") return SwapMode::none;
  if (mode == "perfect") return SwapMode::perfect;
  return SwapMode::finite_tau;
}

DiagonalMode ExperimentConfig::diagonal_mode() const {
  if (mode == "qa") return DiagonalMode::qa;
  if (mode == "perfect") return DiagonalMode::perfect;
  throw std::invalid_argument(
      "config: the diagonal path supports qa or perfect mode only");
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.preset_name = name;
  if (name == "fig2ab") {
    c.params = QutritParams{0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0};
    c.beta_c = 6.66;
    c.beta_h = 3.28;
    c.copies = 2;
  } else if (name == "fig2d") {
    c.params = QutritParams{0.0, 0.57, 0.35, 1.0};
    c.beta_c = 2.22;
    c.beta_h = 1.09;
    c.copies = 3;
  } else if (name == "fig3") {
    c.params = QutritParams{0.0, 0.595, 0.125, 1.0};
    c.beta_c = 1.85;
    c.beta_h = 1.71;
    c.copies = 2;
    c.mode = "perfect";
  } else {
    throw std::invalid_argument(fmt::format(
        "unknown preset '{}' (expected fig2ab, fig2d or fig3)", name));
  }
  return c;
}

std::vector<std::string> preset_names() { return {"fig2ab", "fig2d", "fig3"}; }

ExperimentConfig config_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(fmt::format("config: malformed JSON: {}", e.what()));
  }
  if (!j.is_object())
    throw std::invalid_argument("config: top level must be a JSON object");

  ExperimentConfig c;
  if (j.contains("preset")) c = preset(j.at("preset").get<std::string>());
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "preset") {
        continue;
      } else if (key == "e0") {
        c.params.e0 = value.get<double>();
      } else if (key == "e1_initial") {
        c.params.e1_initial = value.get<double>();
      } else if (key == "e1_shift") {
        c.params.e1_shift = value.get<double>();
      } else if (key == "e2") {
        c.params.e2 = value.get<double>();
      } else if (key == "beta_c") {
        c.beta_c = value.get<double>();
      } else if (key == "beta_h") {
        c.beta_h = value.get<double>();
      } else if (key == "copies") {
        c.copies = value.get<int>();
      } else if (key == "n_min") {
        c.n_min = value.get<int>();
      } else if (key == "n_max") {
        c.n_max = value.get<int>();
      } else if (key == "tau") {
        c.tau = value.get<double>();
      } else if (key == "tau_min") {
        c.tau_min = value.get<double>();
      } else if (key == "tau_max") {
        c.tau_max = value.get<double>();
      } else if (key == "tau_points") {
        c.tau_points = value.get<int>();
      } else if (key == "mode") {
        c.mode = value.get<std::string>();
      } else if (key == "steps") {
        c.steps = value.get<int>();
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "workers") {
        c.workers = value.get<int>();
      } else if (key == "out") {
        c.out = value.get<std::string>();
      } else if (key == "format") {
        c.format = value.get<std::string>();
      } else {
        throw std::invalid_argument(
            fmt::format("config: unknown key '{}' (keys are rejected rather "
                        "than ignored)",
                        key));
      }
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(
          fmt::format("config: bad value for '{}': {}", key, e.what()));
    }
  }
  c.validate();
  return c;
}

Cell Cell::number(double v) {
  Cell c;
  c.kind = Kind::number;
  c.number_value = v;
  return c;
}

Cell Cell::integer(long long v) {
  Cell c;
  c.kind = Kind::integer;
  c.integer_value = v;
  return c;
}

Cell Cell::text(std::string v) {
  Cell c;
  c.kind = Kind::text;
  c.text_value = std::move(v);
  return c;
}

std::string Cell::formatted() const {
  switch (kind) {
    case Kind::number:
      return fmt::format("{:.12g}", number_value);
    case Kind::integer:
      return fmt::format("{}", integer_value);
    case Kind::text:
      return text_value;
  }
  return {};
}

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t k = 0; k < table.header.size(); ++k)
    out << (k ? "," : "") << table.header[k];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k)
      out << (k ? "," : "") << row[k].formatted();
    out << "\n";
  }
}

void write_json(const Table& table, std::ostream& out) {
  nlohmann::json j;
  j["header"] = table.header;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json jr = nlohmann::json::array();
    for (const Cell& c : row) {
      switch (c.kind) {
        case Cell::Kind::number:
          if (std::isnan(c.number_value))
            jr.push_back(nullptr);
          else
            jr.push_back(c.number_value);
          break;
        case Cell::Kind::integer:
          jr.push_back(c.integer_value);
          break;
        case Cell::Kind::text:
          jr.push_back(c.text_value);
          break;
      }
    }
    j["rows"].push_back(std::move(jr));
  }
  if (!table.row_notes.empty()) {
    j["notes"] = nlohmann::json::array();
    for (const auto& [row, note] : table.row_notes)
      j["notes"].push_back({{"row", row}, {"note", note}});
  }
  out << j.dump(2) << "\n";
}

namespace {

int effective_workers(int configured) {
  if (const char* env = std::getenv("QOTTO_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  if (configured > 0) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Evaluates row tasks concurrently, assembling results in input order.
template <typename Fn>
std::vector<std::string> parallel_rows(std::size_t count, int workers, Fn&& fn) {
  std::vector<std::string> errors(count);
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int n_threads = std::min<std::size_t>(std::max(workers, 1), count);
  if (n_threads <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
  }
  return errors;
}

std::vector<double> tau_grid(const ExperimentConfig& c) {
  std::vector<double> taus(c.tau_points);
  if (c.tau_points == 1) {
    taus[0] = c.tau_min;
    return taus;
  }
  const double lo = std::log(c.tau_min);
  const double hi = std::log(c.tau_max);
  for (int i = 0; i < c.tau_points; ++i)
    taus[i] = std::exp(lo + (hi - lo) * i / (c.tau_points - 1));
  return taus;
}

}  // namespace

Table sweep_tau(const ExperimentConfig& config) {
  config.validate();
  if (config.copies < 2 || config.copies > 3)
    throw std::invalid_argument(
        "sweep_tau: the dense path supports 2 or 3 copies");
  const std::vector<double> taus = tau_grid(config);

  // reference QA energy at B for the delta_E_B column
  const CycleResult qa = diagonal_cycle(config.params, config.copies,
                                        config.beta_c, config.beta_h,
                                        DiagonalMode::qa);

  Table table;
  table.header = {"tau", "p_n_B", "p_m_B", "delta_E_B", "W",
                  "Q_h", "Q_c",   "eta",   "eta_over_carnot"};
  table.rows.assign(taus.size(), {});

  auto errors = parallel_rows(
      taus.size(), effective_workers(config.workers), [&](std::size_t i) {
        const double tau = taus[i];
        const HamiltonianSchedule schedule = make_protocol_schedule(
            config.params, config.copies, SwapMode::finite_tau, tau);
        const CycleRun run =
            run_cycle(schedule, config.beta_c, config.beta_h, config.steps);
        double p_n = kNan, p_m = kNan;
        if (!schedule.swaps.empty()) {
          const RealVector pops = run.points[1].state.populations();
          p_n = pops[word_index(schedule.swaps.front().word_n)];
          p_m = pops[word_index(schedule.swaps.front().word_m)];
        }
        table.rows[i] = {
            Cell::number(tau),
            Cell::number(p_n),
            Cell::number(p_m),
            Cell::number(run.result.energies[1] - qa.energies[1]),
            Cell::number(run.result.work),
            Cell::number(run.result.q_hot),
            Cell::number(run.result.q_cold),
            Cell::number(run.result.eta),
            Cell::number(run.result.eta / run.result.eta_carnot)};
      });
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i].empty()) continue;
    table.rows[i] = {Cell::number(taus[i]), Cell::number(kNan),
                     Cell::number(kNan),    Cell::number(kNan),
                     Cell::number(kNan),    Cell::number(kNan),
                     Cell::number(kNan),    Cell::number(kNan),
                     Cell::number(kNan)};
    table.row_notes.emplace_back(i, errors[i]);
  }
  return table;
}

Table sweep_copies(const ExperimentConfig& config) {
  config.validate();
  const DiagonalMode mode = config.diagonal_mode();
  const int count = config.n_max - config.n_min + 1;

  Table table;
  table.header = {"N",   "W",   "W_per_copy",      "Q_h",
                  "Q_c", "eta", "eta_over_carnot", "eta_manybody",
                  "D_B_over_betaQ"};
  table.rows.assign(count, {});

  auto errors = parallel_rows(
      count, effective_workers(config.workers), [&](std::size_t i) {
        const int copies = config.n_min + static_cast<int>(i);
        const CycleResult r = diagonal_cycle(config.params, copies,
                                             config.beta_c, config.beta_h, mode);
        table.rows[i] = {
            Cell::integer(copies),
            Cell::number(r.work),
            Cell::number(r.work / copies),
            Cell::number(r.q_hot),
            Cell::number(r.q_cold),
            Cell::number(r.eta),
            Cell::number(r.eta / r.eta_carnot),
            Cell::number(r.eta_manybody),
            Cell::number(r.rel_entropy_b / (r.beta_ref_b * r.q_hot_ref))};
      });
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i].empty()) continue;
    table.rows[i] = {Cell::integer(config.n_min + static_cast<long long>(i)),
                     Cell::number(kNan), Cell::number(kNan), Cell::number(kNan),
                     Cell::number(kNan), Cell::number(kNan), Cell::number(kNan),
                     Cell::number(kNan), Cell::number(kNan)};
    table.row_notes.emplace_back(i, errors[i]);
  }
  return table;
}

namespace {

Table cycle_result_table(const CycleResult& r, const SecondLawCheck& law,
                         const std::string& mode, double tau) {
  Table table;
  table.header = {"copies",        "mode",
                  "tau",           "W",
                  "Q_h",           "Q_c",
                  "eta",           "eta_over_carnot",
                  "engine",        "first_law_residual",
                  "beta_B_ref",    "beta_D_ref",
                  "Q_h_ref",       "Q_c_ref",
                  "D_B",           "D_D",
                  "eta_manybody",  "second_law_hot_margin",
                  "second_law_cold_margin"};
  table.rows.push_back(
      {Cell::integer(r.copies), Cell::text(mode), Cell::number(tau),
       Cell::number(r.work), Cell::number(r.q_hot), Cell::number(r.q_cold),
       Cell::number(r.eta), Cell::number(r.eta / r.eta_carnot),
       Cell::integer(r.engine ? 1 : 0), Cell::number(r.first_law_residual),
       Cell::number(r.beta_ref_b), Cell::number(r.beta_ref_d),
       Cell::number(r.q_hot_ref), Cell::number(r.q_cold_ref),
       Cell::number(r.rel_entropy_b), Cell::number(r.rel_entropy_d),
       Cell::number(r.eta_manybody), Cell::number(law.hot_margin),
       Cell::number(law.cold_margin)});
  return table;
}

}  // namespace

Table run_cycle_table(const ExperimentConfig& config) {
  config.validate();
  if (config.mode == "finite" || config.copies <= 3) {
    const HamiltonianSchedule schedule = make_protocol_schedule(
        config.params, config.copies, config.swap_mode(),
        config.mode == "finite" ? config.tau : 1.0);
    const CycleRun run =
        run_cycle(schedule, config.beta_c, config.beta_h, config.steps);
    return cycle_result_table(run.result, second_law_check(run.result),
                              config.mode,
                              config.mode == "finite" ? config.tau : 0.0);
  }
  const CycleResult r = diagonal_cycle(config.params, config.copies,
                                       config.beta_c, config.beta_h,
                                       config.diagonal_mode());
  return cycle_result_table(r, second_law_check(r), config.mode, 0.0);
}

Table limit_table(const ExperimentConfig& config) {
  config.validate();
  const ManyBodyLimit limit =
      many_body_limit(config.params, config.beta_c, config.beta_h);
  Table table;
  table.header = {"eta_manybody",        "eta_carnot",
                  "beta_B_ref",          "beta_D_ref",
                  "Q_h_ref_per_copy",    "Q_c_ref_per_copy",
                  "engine_at_reference", "degenerate"};
  table.rows.push_back({Cell::number(limit.value),
                        Cell::number(1.0 - config.beta_h / config.beta_c),
                        Cell::number(limit.beta_ref_b),
                        Cell::number(limit.beta_ref_d),
                        Cell::number(limit.q_hot_ref_per_copy),
                        Cell::number(limit.q_cold_ref_per_copy),
                        Cell::integer(limit.engine_at_reference ? 1 : 0),
                        Cell::integer(limit.degenerate ? 1 : 0)});
  return table;
}

Table crossings_table(const ExperimentConfig& config) {
  config.validate();
  HamiltonianSchedule schedule;
  schedule.params = config.params;
  schedule.copies = config.copies;
  schedule.t_a = 0.0;
  schedule.t_ab = 1.0;  // unit ramp so crossing times read as fractions
  schedule.t_b = 2.0;
  const std::vector<CrossingGroup> groups = detect_crossings(schedule);

  Table table;
  table.header = {"group",  "word_n",         "word_m",
                  "comp_n", "comp_m",         "e1_cross",
                  "t_cross", "multiplicity_n", "multiplicity_m"};
  auto comp_label = [](const std::array<int, 3>& c) {
    return fmt::format("{}:{}:{}", c[0], c[1], c[2]);
  };
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const CrossingGroup& grp = groups[g];
    const std::vector<int> word_n = word_of_index(
        words_of_composition(config.copies, grp.comp_n).front(), config.copies);
    const std::vector<int> word_m = word_of_index(
        words_of_composition(config.copies, grp.comp_m).front(), config.copies);
    table.rows.push_back({Cell::integer(static_cast<long long>(g)),
                          Cell::text(word_label(word_n)),
                          Cell::text(word_label(word_m)),
                          Cell::text(comp_label(grp.comp_n)),
                          Cell::text(comp_label(grp.comp_m)),
                          Cell::number(grp.crossing_e1),
                          Cell::number(grp.crossing_time),
                          Cell::integer(grp.multiplicity_n),
                          Cell::integer(grp.multiplicity_m)});
  }
  return table;
}

}  // namespace qotto
