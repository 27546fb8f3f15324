#include "anholo/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "anholo/cli/setup.hpp"
#include "anholo/error.hpp"
#include "anholo/passage.hpp"
#include "anholo/spectral.hpp"
#include "pool.hpp"

namespace anholo::cli {

namespace {

Json header(const std::string& command, const Json& config) {
  return Json{{"schema_version", kSchemaVersion}, {"command", command}, {"config", config}};
}

std::string csv_preamble(const std::string& command, const Json& config) {
  return "# anholo " + command + " schema_version=" + std::to_string(kSchemaVersion) + "\n# config=" +
         config.dump() + "\n";
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t seed_of(const Json& config) { return static_cast<std::uint64_t>(get_long(config, "seed")); }

std::vector<long> positive_list(const Json& config, const char* key) {
  auto values = get_long_list(config, key);
  if (values.empty()) throw Error(ErrorCode::ConfigError, std::string("'") + key + "' must not be empty");
  for (long v : values) {
    if (v < 1) throw Error(ErrorCode::InvalidArgument, std::string("'") + key + "' entries must be positive");
  }
  return values;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

CMatrix lz_hamiltonian(double s) {
  return CMatrix{{0.5 * (1.0 - s), -0.5 * (1.0 - s)}, {-0.5 * (1.0 - s), 0.5 * (1.0 - s) + s}};
}

}  // namespace

CommandResult run_spectrum(const Json& config, int) {
  const ModelSetup setup = build_model(config);
  if (!setup.system) throw Error(ErrorCode::TooLarge, "spectrum needs a dense system");
  TrackOptions opt;
  opt.store_vectors = false;
  const auto set = track_curves(*setup.system, 0.0, kTwoPi, static_cast<int>(get_long(config, "samples")), opt);
  const std::size_t curve = set.curve_for_state(setup.initial);
  const GapReport gap = min_gap(set, static_cast<int>(curve));

  std::ostringstream csv;
  csv << csv_preamble("spectrum", config);
  write_curves_csv(csv, set);

  Json summary = header("spectrum", config);
  summary["summary"] = Json{{"anholonomy_shift", detect_anholonomy(set[curve])},
                            {"min_gap", gap.min_gap},
                            {"s_at_min", gap.s_at_min},
                            {"curve_id", curve},
                            {"gap_partner", gap.curve_index_pair.second},
                            {"curves", set.size()}};
  return {csv.str(), summary.dump(2) + "\n"};
}

CommandResult run_passage_cmd(const Json& config, int threads) {
  const ModelSetup setup = build_model(config);
  const std::string which = get_string(config, "schedule");
  if (which != "linear" && which != "roland_cerf" && which != "both")
    throw Error(ErrorCode::ConfigError, "schedule must be linear, roland_cerf or both");
  const double epsilon = get_double(config, "epsilon");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  const auto lengths = positive_list(config, "L_values");
  RunningTimeOptions rt;
  rt.max_steps = get_long(config, "max_steps");

  std::vector<std::pair<std::string, ScheduleFamily>> families;
  if (which != "roland_cerf") families.emplace_back("linear", [](int l) { return linear_schedule(kTwoPi, l); });
  std::shared_ptr<RolandCerfDensity> density;
  if (which != "linear") {
    if (!setup.system) throw Error(ErrorCode::TooLarge, "roland_cerf needs a dense system");
    auto sub = std::make_shared<CoupledSubspace>(*setup.system);
    density = std::make_shared<RolandCerfDensity>([sub](double s) { return instantaneous_gap(*sub, s); }, kTwoPi);
    families.emplace_back("roland_cerf", [density](int l) { return density->schedule(l); });
  }

  // Tasks: one per (family, L) table entry, then one running-time search per family.
  const std::size_t n_table = families.size() * lengths.size();
  std::vector<double> errors(n_table);
  std::vector<long> running(families.size());
  parallel_for(n_table + families.size(), threads, seed_of(config), [&](std::size_t t) {
    if (t < n_table) {
      const auto& family = families[t / lengths.size()].second;
      const int l = static_cast<int>(lengths[t % lengths.size()]);
      errors[t] = run_passage(*setup.map, family(l), setup.initial, setup.target).error;
    } else {
      const std::size_t f = t - n_table;
      running[f] = running_time(*setup.map, families[f].second, setup.initial, setup.target, epsilon, rt);
    }
  });

  Json out = header("passage", config);
  Json table = Json::array();
  for (std::size_t t = 0; t < n_table; ++t) {
    table.push_back(Json{{"schedule", families[t / lengths.size()].first},
                         {"L", lengths[t % lengths.size()]},
                         {"error", errors[t]}});
  }
  out["error_table"] = table;
  Json times = Json::object();
  for (std::size_t f = 0; f < families.size(); ++f) times[families[f].first] = running[f];
  out["running_time"] = times;
  if (families.size() == 2) out["ratio_roland_cerf_to_linear"] = static_cast<double>(running[1]) / running[0];
  return {out.dump(2) + "\n", {}};
}

CommandResult run_gap_scan(const Json& config, int threads) {
  if (get_string(config, "model") != "grover_fair")
    throw Error(ErrorCode::ConfigError, "gap-scan supports model 'grover_fair' only");
  auto sizes = positive_list(config, "N_values");
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  const int samples = static_cast<int>(get_long(config, "samples"));
  const FairGroverParams base = fair_params(config);

  std::vector<FairGroverAnalysis> rows(sizes.size());
  parallel_for(sizes.size(), threads, seed_of(config), [&](std::size_t i) {
    FairGroverParams p = base;
    p.n = sizes[i];
    rows[i] = perturbative_gap(p, samples);
  });

  std::ostringstream csv;
  csv << csv_preamble("gap-scan", config);
  csv << "N,min_gap,gap_perturbative,s_c\n";
  std::vector<double> log_n, log_gap;
  for (const auto& r : rows) {
    csv << r.n << ',' << fmt(r.gap_numeric) << ',' << fmt(r.gap_perturbative) << ',' << fmt(r.s_c) << '\n';
    log_n.push_back(std::log(static_cast<double>(r.n)));
    log_gap.push_back(std::log(r.gap_numeric));
  }
  if (rows.size() >= 2) csv << "fit_slope," << fmt(least_squares_slope(log_n, log_gap)) << ",,\n";
  return {csv.str(), {}};
}

CommandResult run_clock_demo(const Json& config, int threads) {
  const auto circuit = parse_circuit(static_cast<int>(get_long(config, "n")), config.at("circuit"));
  const auto problem = compose_circuit_aaqc(circuit, get_double(config, "E_P"), get_double(config, "T"));
  const CVector expected = simulate_circuit(circuit);

  std::vector<long> lengths = positive_list(config, "L_values");
  const long main_steps = get_long(config, "L_steps");
  if (main_steps < 1) throw Error(ErrorCode::InvalidArgument, "L_steps must be positive");
  lengths.push_back(main_steps);

  struct Row {
    double error = 0.0;
    double fidelity = 0.0;
    double probability = 0.0;
  };
  std::vector<Row> rows(lengths.size());
  parallel_for(lengths.size(), threads, seed_of(config), [&](std::size_t i) {
    const auto result =
        run_passage(*problem.map, linear_schedule(kTwoPi, static_cast<int>(lengths[i])), problem.minus, problem.plus);
    const auto output = extract_output(result.final_state, circuit);
    rows[i] = {result.error, std::norm(inner(expected, output.state)), output.probability};
  });

  Json out = header("clock-demo", config);
  out["circuit"] = circuit_to_json(circuit);
  out["period"] = problem.period;
  out["w_max"] = problem.w_max;
  const Row& main = rows.back();
  out["L_steps"] = main_steps;
  out["passage_error"] = main.error;
  out["fidelity"] = main.fidelity;
  out["post_selection_probability"] = main.probability;
  Json table = Json::array();
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    table.push_back(Json{{"L", lengths[i]},
                         {"passage_error", rows[i].error},
                         {"fidelity", rows[i].fidelity},
                         {"post_selection_probability", rows[i].probability}});
  }
  out["delta_vs_L"] = table;
  return {out.dump(2) + "\n", {}};
}

CommandResult run_discretize(const Json& config, int threads) {
  if (get_string(config, "model") != "landau_zener")
    throw Error(ErrorCode::ConfigError, "discretize supports model 'landau_zener' only");
  const double t_max = get_double(config, "t_max");
  if (!(t_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_max must be positive");
  const auto lengths = positive_list(config, "L_values");
  const long l_ref = get_long(config, "L_ref");
  if (l_ref < 1) throw Error(ErrorCode::InvalidArgument, "L_ref must be positive");

  const SaqcProblem problem{lz_hamiltonian, 1.0, [t_max](double t) { return t / t_max; }, t_max};
  const CVector psi0 = CVector{1.0, 1.0}.normalized();
  auto evolve = [&](long steps) {
    CVector psi = psi0;
    for (const auto& u : discretize_saqc(problem, uniform_time_grid(t_max, static_cast<int>(steps)))) psi = u * psi;
    return psi;
  };
  const CVector reference = evolve(l_ref);

  std::vector<std::pair<double, double>> rows(lengths.size());
  parallel_for(lengths.size(), threads, seed_of(config), [&](std::size_t i) {
    const CVector psi = evolve(lengths[i]);
    rows[i] = {(psi - reference).norm(), std::norm(inner(reference, psi))};
  });

  Json out = header("discretize", config);
  Json table = Json::array();
  for (std::size_t i = 0; i < rows.size(); ++i)
    table.push_back(Json{{"L", lengths[i]}, {"distance", rows[i].first}, {"fidelity", rows[i].second}});
  out["convergence"] = table;
  return {out.dump(2) + "\n", {}};
}

CommandResult run_command(const std::string& command, const Json& config, int threads) {
  if (command == "spectrum") return run_spectrum(config, threads);
  if (command == "passage") return run_passage_cmd(config, threads);
  if (command == "gap-scan") return run_gap_scan(config, threads);
  if (command == "clock-demo") return run_clock_demo(config, threads);
  if (command == "discretize") return run_discretize(config, threads);
  throw Error(ErrorCode::ConfigError, "unknown command '" + command + "'");
}

}  // namespace anholo::cli
