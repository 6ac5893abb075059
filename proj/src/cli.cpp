// Copyright 2026 The grindopt Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

#include "grindopt/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <optional>

#include "CLI11.hpp"

#include "grindopt/errors.hpp"
#include "grindopt/random.hpp"
#include "grindopt/serialization.hpp"
#include "grindopt/service.hpp"
#include "grindopt/store.hpp"

namespace grindopt {

namespace {

constexpr std::uint64_t kPlantStream = 0x706c6e74;  // "plnt"

std::string field(double v) { return format_double(v); }

std::string field(const std::optional<double>& v) { return v ? format_double(*v) : "na"; }

bool measured_feasible(const TrialRecord& trial, const SessionConfig& config) {
  return trial.outcome.first_side_temperature_c <= config.temperature.limit &&
         trial.outcome.max_roughness_nm <= config.roughness.limit;
}

// SOURCE_DATE_EPOCH when set, else the Unix epoch, so reruns are byte-identical.
std::string reproducible_timestamp() {
  long long seconds = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long parsed = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && parsed >= 0) {
      seconds = parsed;
    }
  }
  return utc_timestamp(std::chrono::system_clock::time_point(std::chrono::seconds(seconds)));
}

PlantModel load_plant(const std::string& path) {
  if (path.empty()) {
    return default_plant();
  }
  return plant_from_json(parse_json(read_file(path)));
}

SessionDocument load_session_file(const std::string& path) { return load_document_file(path); }

Session restore_with_models(const SessionDocument& doc) {
  Session session = Session::restore(doc.state);
  if (!session.has_models()) {
    throw ValidationError("session", "needs at least two recorded trials and fitted models");
  }
  return session;
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file_atomic(path, text);
  }
}

// Pair up threshold lists; a single value is broadcast against the other list.
std::vector<std::pair<double, double>> pair_thresholds(std::vector<double> p_t, std::vector<double> p_ra) {
  if (p_t.empty()) {
    p_t.push_back(0.5);
  }
  if (p_ra.empty()) {
    p_ra.push_back(0.5);
  }
  if (p_t.size() != p_ra.size() && p_t.size() != 1 && p_ra.size() != 1) {
    throw ValidationError("pmin", "--pmin-t and --pmin-ra need equal counts, or one of them a single value");
  }
  const std::size_t n = std::max(p_t.size(), p_ra.size());
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.emplace_back(p_t[p_t.size() == 1 ? 0 : i], p_ra[p_ra.size() == 1 ? 0 : i]);
  }
  return out;
}

}  // namespace

std::uint64_t plant_run_seed(std::uint64_t session_seed, std::size_t trial_index) {
  return derive_seed(session_seed, {kPlantStream, trial_index});
}

Session run_simulation(const PlantModel& plant, const SessionConfig& config, std::ostream* log) {
  plant.validate();
  Session session = Session::create(config);
  std::size_t iteration = 0;
  while (const auto proposal = session.next_proposal()) {
    const auto outcome = simulate_run(plant, *proposal, plant_run_seed(config.seed, session.trials().size()));
    const TrialRecord trial = session.record_trial(*proposal, outcome);
    const StepReport report = session.advance();
    ++iteration;
    if (log) {
      const auto& rec = report.recommendation;
      *log << "iter=" << iteration << " cutting_speed_mps=" << field(trial.params.cutting_speed_mps)
           << " feed_rate_mmpm=" << field(trial.params.feed_rate_mmpm) << " cost_U=" << field(trial.cost_u)
           << " feasible=" << (measured_feasible(trial, session.config()) ? 1 : 0)
           << " two_sigma_U=" << field(report.convergence.criterion_value_u)
           << " rec_cutting_speed_mps=" << field(rec ? std::optional(rec->params.cutting_speed_mps) : std::nullopt)
           << " rec_feed_rate_mmpm=" << field(rec ? std::optional(rec->params.feed_rate_mmpm) : std::nullopt)
           << " expected_cost_U=" << field(rec ? std::optional(rec->expected_cost_u) : std::nullopt)
           << " converged=" << (report.convergence.converged ? 1 : 0) << '\n';
    }
  }
  return session;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constrained Bayesian optimization of grinding parameters"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run the optimization loop against the plant simulator");
  std::string plant_path;
  std::uint64_t seed = 1;
  int max_trials = SessionConfig{}.trial_cap;
  double epsilon = SessionConfig{}.epsilon_u;
  double sim_pmin_t = 0.5;
  double sim_pmin_ra = 0.5;
  std::string sim_out;
  simulate->add_option("--plant", plant_path, "Plant configuration (JSON); default plant if omitted");
  simulate->add_option("--seed", seed, "Session seed")->capture_default_str();
  simulate->add_option("--max-trials", max_trials, "Trial cap")->capture_default_str();
  simulate->add_option("--epsilon", epsilon, "Convergence threshold on 2 sigma of cost (U)")->capture_default_str();
  simulate->add_option("--pmin-t", sim_pmin_t, "Minimal temperature feasibility probability")->capture_default_str();
  simulate->add_option("--pmin-ra", sim_pmin_ra, "Minimal roughness feasibility probability")->capture_default_str();
  simulate->add_option("--out", sim_out, "Session document to write (default sim-<seed>.json)");

  // recommend
  auto* recommend = app.add_subcommand("recommend", "Recommend cost-optimal parameters from a session");
  std::string session_path;
  std::vector<double> rec_pmin_t;
  std::vector<double> rec_pmin_ra;
  recommend->add_option("--session", session_path, "Session document")->required();
  recommend->add_option("--pmin-t", rec_pmin_t, "Temperature threshold(s)");
  recommend->add_option("--pmin-ra", rec_pmin_ra, "Roughness threshold(s)");

  // export-surfaces
  auto* surfaces = app.add_subcommand("export-surfaces", "Write posterior mean and variance on a grid");
  std::string quantity = std::string(kCost);
  int grid_n = 101;
  std::string export_out;
  surfaces->add_option("--session", session_path, "Session document")->required();
  surfaces->add_option("--quantity", quantity, "cost, temperature or roughness")->capture_default_str();
  surfaces->add_option("--grid-n", grid_n, "Grid points per axis")->capture_default_str();
  surfaces->add_option("--out", export_out, "Output file (stdout if omitted)");

  // export-log
  auto* export_log = app.add_subcommand("export-log", "Write the trial log as CSV");
  export_log->add_option("--session", session_path, "Session document")->required();
  export_log->add_option("--out", export_out, "Output file (stdout if omitted)");

  // plant-surfaces
  auto* plant_surfaces = app.add_subcommand("plant-surfaces", "Write the noiseless plant responses on a grid");
  plant_surfaces->add_option("--plant", plant_path, "Plant configuration (JSON)");
  plant_surfaces->add_option("--grid-n", grid_n, "Grid points per axis")->capture_default_str();
  plant_surfaces->add_option("--out", export_out, "Output file (stdout if omitted)");

  // plant-optimum
  auto* plant_optimum = app.add_subcommand("plant-optimum", "Dense-grid noiseless constrained optimum of the plant");
  int optimum_grid = 1001;
  plant_optimum->add_option("--plant", plant_path, "Plant configuration (JSON)");
  plant_optimum->add_option("--grid-n", optimum_grid, "Grid points per axis")->capture_default_str();

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
  std::string listen = "127.0.0.1:8080";
  std::string data_dir = "sessions";
  std::uint64_t default_seed = 1;
  serve->add_option("--listen", listen, "host:port")->envname("GRINDOPT_LISTEN")->capture_default_str();
  serve->add_option("--data-dir", data_dir, "Session directory")->envname("GRINDOPT_DATA_DIR")->capture_default_str();
  serve->add_option("--seed", default_seed, "Seed for sessions that do not set one")
      ->envname("GRINDOPT_SEED")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::kOk : exit_code::kValidation;
  }

  try {
    if (*simulate) {
      SessionConfig config;
      config.seed = seed;
      config.trial_cap = max_trials;
      config.epsilon_u = epsilon;
      config.temperature.p_min = sim_pmin_t;
      config.roughness.p_min = sim_pmin_ra;
      config.validate();
      const PlantModel plant = load_plant(plant_path);
      const Session session = run_simulation(plant, config, &out);

      SessionDocument doc;
      doc.id = "sim-" + std::to_string(seed);
      doc.created_at = doc.updated_at = reproducible_timestamp();
      doc.state = session.state();
      save_document_file(sim_out.empty() ? doc.id + ".json" : sim_out, doc);
      if (!session.converged()) {
        err << "not converged after " << session.trials().size() << " trials\n";
        return exit_code::kNotConverged;
      }
      return exit_code::kOk;
    }

    if (*recommend) {
      const Session session = restore_with_models(load_session_file(session_path));
      const auto thresholds = pair_thresholds(rec_pmin_t, rec_pmin_ra);
      const auto recs = session.recommend_ladder(thresholds);
      out << "p_min_T,p_min_Ra,cutting_speed_mps,feed_rate_mmpm,expected_cost_U,cost_ci_halfwidth_U,p_f_T,p_f_Ra\n";
      bool any_missing = false;
      for (std::size_t i = 0; i < recs.size(); ++i) {
        out << field(thresholds[i].first) << ',' << field(thresholds[i].second) << ',';
        if (!recs[i]) {
          out << "none,none,none,none,none,none\n";
          any_missing = true;
          continue;
        }
        const auto& r = *recs[i];
        out << field(r.params.cutting_speed_mps) << ',' << field(r.params.feed_rate_mmpm) << ','
            << field(r.expected_cost_u) << ',' << field(r.cost_ci_halfwidth_u) << ','
            << field(r.feasibility.at(std::string(kTemperature))) << ','
            << field(r.feasibility.at(std::string(kRoughness))) << '\n';
      }
      if (any_missing) {
        err << "no parameters meet the requested feasibility thresholds\n";
        return exit_code::kNoFeasibleRegion;
      }
      return exit_code::kOk;
    }

    if (*surfaces) {
      if (quantity != kCost && quantity != kTemperature && quantity != kRoughness) {
        throw ValidationError("quantity", "must be one of cost, temperature, roughness");
      }
      if (grid_n < 2) {
        throw ValidationError("grid-n", "must be at least 2");
      }
      const Session session = restore_with_models(load_session_file(session_path));
      write_output(export_out, surface_csv(session.surface(quantity, grid_n)), out);
      return exit_code::kOk;
    }

    if (*export_log) {
      const auto doc = load_session_file(session_path);
      write_output(export_out, trial_log_csv(doc.state.trials), out);
      return exit_code::kOk;
    }

    if (*plant_surfaces) {
      if (grid_n < 2) {
        throw ValidationError("grid-n", "must be at least 2");
      }
      const PlantModel plant = load_plant(plant_path);
      const CostParams cost;
      std::string text =
          "cutting_speed_mps,feed_rate_mmpm,first_side_temp_C,max_roughness_nm,dressing_interval_inserts,censored,"
          "cost_U\n";
      for (const auto& x : grid_points(Domain::grinding_default(), grid_n)) {
        const auto params = ProcessParams::from_vector(x);
        const auto o = true_surfaces(plant, params);
        const double c = cost_per_insert(params.cutting_speed_mps, params.feed_rate_mmpm,
                                         removed_volume(o.dressing_interval_inserts, cost), cost);
        text += field(params.cutting_speed_mps) + ',' + field(params.feed_rate_mmpm) + ',' +
                field(o.first_side_temperature_c) + ',' + field(o.max_roughness_nm) + ',' +
                field(o.dressing_interval_inserts) + (o.censored ? ",true," : ",false,") + field(c) + '\n';
      }
      write_output(export_out, text, out);
      return exit_code::kOk;
    }

    if (*plant_optimum) {
      const PlantModel plant = load_plant(plant_path);
      const SessionConfig defaults;
      const auto best = plant_constrained_optimum(plant, defaults.domain, defaults.cost, defaults.temperature.limit,
                                                  defaults.roughness.limit, optimum_grid);
      out << "cutting_speed_mps=" << field(best.params.cutting_speed_mps)
          << " feed_rate_mmpm=" << field(best.params.feed_rate_mmpm) << " cost_U=" << field(best.cost_u)
          << " dressing_interval_inserts=" << field(best.outcome.dressing_interval_inserts) << '\n';
      return exit_code::kOk;
    }

    if (*serve) {
      const auto colon = listen.rfind(':');
      int port = 0;
      if (colon == std::string::npos ||
          std::from_chars(listen.data() + colon + 1, listen.data() + listen.size(), port).ec != std::errc() ||
          port <= 0 || port > 65535) {
        throw ValidationError("listen", "expected host:port");
      }
      const std::string host = listen.substr(0, colon);
      ServiceOptions options;
      options.default_seed = default_seed;
      SessionService service(SessionStore(data_dir), options);
      HttpServer server(service);
      if (!server.bind(host, port)) {
        err << "cannot listen on " << listen << '\n';
        return exit_code::kFailure;
      }
      err << "serving on http://" << listen << " (data: " << data_dir << ")\n";
      server.listen_after_bind();
      return exit_code::kOk;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kValidation;
  } catch (const NotFoundError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kNotFound;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kNumerical;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << " (byte " << e.byte_offset() << ")\n";
    return exit_code::kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kFailure;
  }
  return exit_code::kFailure;
}

}  // namespace grindopt
