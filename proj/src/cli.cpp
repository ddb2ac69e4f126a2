#include "mdm/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mdm/ensembles.hpp"
#include "mdm/mdm_protocol.hpp"
#include "mdm/optics_sim.hpp"
#include "mdm/quantum_core.hpp"
#include "mdm/random.hpp"
#include "mdm/tradeoff_bounds.hpp"
#include "mdm/version.hpp"

namespace mdm::cli {

namespace {

using nlohmann::json;

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string iso_utc_now() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Options {
  std::string family;
  int points = 101;
  double theta = 0.0;
  bool theta_set = false;
  std::string theta_frac;
  std::string ensemble;
  double r_h = 0.0;
  double r_v = 1.0;
  long trials = 100000;
  std::uint64_t seed = 12345;
  int workers = 1;
  bool no_feed_forward = false;
  std::string out;
};

// Resolves --theta / --theta-frac into radians; throws CLI::ValidationError
// with the valid range on bad input.
double resolve_theta(const Options& opt) {
  double theta = opt.theta;
  if (!opt.theta_frac.empty()) {
    long num = 0, den = 0;
    char sep = 0;
    std::istringstream in(opt.theta_frac);
    if (!(in >> num >> sep >> den) || sep != '/' || den == 0 || !in.eof()) {
      throw CLI::ValidationError(
          "--theta-frac", "expected a fraction k/n (theta = pi*k/n)");
    }
    theta = std::numbers::pi * static_cast<double>(num) /
            static_cast<double>(den);
  } else if (!opt.theta_set) {
    throw CLI::ValidationError("--theta",
                               "one of --theta or --theta-frac is required");
  }
  if (!(theta >= -1e-9 && theta <= MeasurementStrength::max_radians() + 1e-9)) {
    throw CLI::ValidationError(
        "--theta", "theta must lie in [0, 0.785398] radians (0 to pi/4)");
  }
  return std::clamp(theta, 0.0, MeasurementStrength::max_radians());
}

json base_manifest(const std::string& command, const Options& opt) {
  json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["generated_at"] = iso_utc_now();
  m["config"] = json::object();
  m["config"]["seed"] = opt.seed;
  m["config"]["workers"] = opt.workers;
  m["output"] = opt.out;
  return m;
}

int write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot open '" << path << "' for writing\n";
    return kIoError;
  }
  out << body;
  out.flush();
  if (!out.good()) {
    std::cerr << "error: failed while writing '" << path << "'\n";
    return kIoError;
  }
  return kOk;
}

int write_manifest(const std::string& out_path, const json& manifest) {
  return write_text_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

// --- curve ----------------------------------------------------------------

int do_curve(const Options& opt) {
  if (opt.points < 2) {
    std::cerr << "error: --points must be at least 2\n";
    return kUsageError;
  }
  BoundFamily family;
  if (opt.family == "universal") {
    family = BoundFamily::Universal;
  } else if (opt.family == "covariant") {
    family = BoundFamily::Covariant;
  } else {
    std::cerr << "error: --family must be 'universal' or 'covariant'\n";
    return kUsageError;
  }

  std::ostringstream csv;
  csv << "theta,g,f,residual\n";
  for (const TradeoffPoint& p : bound_curve(family, opt.points)) {
    const double residual =
        saturation_residual(MeasurementStrength(p.theta), family);
    csv << fmt6(p.theta) << ',' << fmt6(p.g) << ',' << fmt6(p.f) << ','
        << fmt6(residual) << '\n';
  }
  if (const int rc = write_text_file(opt.out, csv.str()); rc != kOk) return rc;

  json manifest = base_manifest("curve", opt);
  manifest["config"]["family"] = opt.family;
  manifest["config"]["points"] = opt.points;
  return write_manifest(opt.out, manifest);
}

// --- experiment -----------------------------------------------------------

struct EnsembleRunRow {
  std::string label;
  double f = 0.0;
  double g = 0.0;
  double se_f = 0.0;
  double se_g = 0.0;
  double discarded_fraction = 0.0;
  std::uint64_t coincidences = 0;
};

EnsembleRunRow state_row(const LabeledState& state, MeasurementStrength theta,
                         const PbsModel& pbs, long trials, std::uint64_t seed,
                         bool feed_forward, int workers) {
  const ExperimentConfig config{theta, pbs, trials, seed, feed_forward};
  const CoincidenceCounts counts = simulate_counts(config, state.state,
                                                   workers);
  EnsembleRunRow row;
  row.label = state.label;
  row.coincidences = counts.coincidences();
  const double nc = static_cast<double>(row.coincidences);
  row.f = estimate_fidelity(counts);
  row.g = estimate_guess(counts, state.state);
  row.se_f = std::sqrt(std::max(row.f * (1.0 - row.f), 0.0) / nc);
  const double p_h =
      static_cast<double>(counts.n_h_phi + counts.n_h_phiperp) / nc;
  const double spread =
      std::abs(std::norm(state.state.alpha()) - std::norm(state.state.beta()));
  row.se_g = spread * std::sqrt(std::max(p_h * (1.0 - p_h), 0.0) / nc);
  row.discarded_fraction = static_cast<double>(counts.n_discarded) /
                           static_cast<double>(counts.total_trials);
  return row;
}

EnsembleRunRow average_row(const std::vector<EnsembleRunRow>& rows) {
  EnsembleRunRow avg;
  avg.label = "average";
  double se_f_sq = 0.0, se_g_sq = 0.0;
  for (const auto& r : rows) {
    avg.f += r.f;
    avg.g += r.g;
    se_f_sq += r.se_f * r.se_f;
    se_g_sq += r.se_g * r.se_g;
    avg.discarded_fraction += r.discarded_fraction;
    avg.coincidences += r.coincidences;
  }
  const double n = static_cast<double>(rows.size());
  avg.f /= n;
  avg.g /= n;
  avg.se_f = std::sqrt(se_f_sq) / n;
  avg.se_g = std::sqrt(se_g_sq) / n;
  avg.discarded_fraction /= n;
  return avg;
}

// Per-shot sampling for the continuous families: a fresh random input per
// trial, guess scored against the clicked detector's basis state.
EnsembleRunRow sampled_ensemble_row(EnsembleFamily family,
                                    MeasurementStrength theta,
                                    const PbsModel& pbs, long trials,
                                    std::uint64_t seed, bool feed_forward) {
  RandomStream rng = RandomStream::derive(seed, 0);
  double f_sum = 0.0, f_sq = 0.0, g_sum = 0.0, g_sq = 0.0;
  std::uint64_t nc = 0, discarded = 0;
  for (long i = 0; i < trials; ++i) {
    const PureQubit state =
        family == EnsembleFamily::UniversalHaar
            ? sample_haar(rng)
            : equatorial_state(rng.uniform(0.0, 2.0 * std::numbers::pi));
    const ClickTable table = click_table(state, theta, pbs, feed_forward);
    const ShotRecord shot = draw_shot(table, rng);
    if (shot.discarded) {
      ++discarded;
      continue;
    }
    ++nc;
    const double f = shot.analyzer == AnalyzerClick::DPhi ? 1.0 : 0.0;
    const PureQubit guess = shot.readout == ReadoutClick::DH
                                ? PureQubit::horizontal()
                                : PureQubit::vertical();
    const double g = overlap(state, guess);
    f_sum += f;
    f_sq += f * f;
    g_sum += g;
    g_sq += g * g;
  }
  EnsembleRunRow row;
  row.label = "average";
  row.coincidences = nc;
  row.discarded_fraction =
      static_cast<double>(discarded) / static_cast<double>(trials);
  if (nc == 0) return row;
  const double n = static_cast<double>(nc);
  row.f = f_sum / n;
  row.g = g_sum / n;
  if (nc > 1) {
    row.se_f = std::sqrt(
        std::max(f_sq - n * row.f * row.f, 0.0) / (n - 1.0) / n);
    row.se_g = std::sqrt(
        std::max(g_sq - n * row.g * row.g, 0.0) / (n - 1.0) / n);
  }
  return row;
}

int do_experiment(const Options& opt) {
  const double theta_val = resolve_theta(opt);
  const MeasurementStrength theta(theta_val);
  const PbsModel pbs(opt.r_h, opt.r_v);
  if (opt.trials < 1) {
    std::cerr << "error: --trials must be at least 1\n";
    return kUsageError;
  }

  std::vector<EnsembleRunRow> rows;
  if (opt.ensemble == "universal6" || opt.ensemble == "covariant4") {
    const auto& states = opt.ensemble == "universal6" ? universal_six()
                                                      : covariant_four();
    for (std::size_t i = 0; i < states.size(); ++i) {
      rows.push_back(state_row(states[i], theta, pbs, opt.trials,
                               mix_seed(opt.seed, i), !opt.no_feed_forward,
                               opt.workers));
    }
    rows.push_back(average_row(rows));
  } else if (opt.ensemble == "haar" || opt.ensemble == "equatorial") {
    const EnsembleFamily family = opt.ensemble == "haar"
                                      ? EnsembleFamily::UniversalHaar
                                      : EnsembleFamily::CovariantEquatorial;
    rows.push_back(sampled_ensemble_row(family, theta, pbs, opt.trials,
                                        opt.seed, !opt.no_feed_forward));
  } else {
    std::cerr << "error: --ensemble must be one of universal6, covariant4, "
                 "haar, equatorial\n";
    return kUsageError;
  }

  std::ostringstream csv;
  csv << "state,theta,f_hat,g_hat,stderr_f,stderr_g,discarded_fraction,"
         "coincidences\n";
  for (const auto& r : rows) {
    csv << r.label << ',' << fmt6(theta_val) << ',' << fmt6(r.f) << ','
        << fmt6(r.g) << ',' << fmt6(r.se_f) << ',' << fmt6(r.se_g) << ','
        << fmt6(r.discarded_fraction) << ',' << r.coincidences << '\n';
  }
  if (const int rc = write_text_file(opt.out, csv.str()); rc != kOk) return rc;

  json manifest = base_manifest("experiment", opt);
  manifest["config"]["theta"] = theta_val;
  manifest["config"]["ensemble"] = opt.ensemble;
  manifest["config"]["r_h"] = opt.r_h;
  manifest["config"]["r_v"] = opt.r_v;
  manifest["config"]["trials"] = opt.trials;
  manifest["config"]["feed_forward"] = !opt.no_feed_forward;
  return write_manifest(opt.out, manifest);
}

// --- mc-average -----------------------------------------------------------

int do_mc_average(const Options& opt) {
  const double theta_val = resolve_theta(opt);
  EnsembleFamily family;
  if (opt.ensemble == "haar") {
    family = EnsembleFamily::UniversalHaar;
  } else if (opt.ensemble == "equatorial") {
    family = EnsembleFamily::CovariantEquatorial;
  } else {
    std::cerr << "error: mc-average supports --ensemble haar or equatorial\n";
    return kUsageError;
  }
  if (opt.trials < 100) {
    std::cerr << "error: --trials must be at least 100 for mc-average\n";
    return kUsageError;
  }

  RandomStream rng = RandomStream::derive(opt.seed, 0);
  const TradeoffPoint p =
      monte_carlo_average(MeasurementStrength(theta_val), family, opt.trials,
                          rng);

  std::ostringstream csv;
  csv << "theta,ensemble,g,f,stderr_g,stderr_f,samples\n";
  csv << fmt6(p.theta) << ',' << opt.ensemble << ',' << fmt6(p.g) << ','
      << fmt6(p.f) << ',' << fmt6(p.stderr_g) << ',' << fmt6(p.stderr_f)
      << ',' << opt.trials << '\n';
  if (opt.out.empty()) {
    std::cout << csv.str();
    return kOk;
  }
  if (const int rc = write_text_file(opt.out, csv.str()); rc != kOk) return rc;

  json manifest = base_manifest("mc-average", opt);
  manifest["config"]["theta"] = theta_val;
  manifest["config"]["ensemble"] = opt.ensemble;
  manifest["config"]["trials"] = opt.trials;
  return write_manifest(opt.out, manifest);
}

// --- reproduce ------------------------------------------------------------

struct HeadlineSetting {
  std::string family;       // "universal" | "covariant"
  double theta;             // 0 or pi/4
  double exp_g, exp_g_err;  // measured reference values
  double exp_f, exp_f_err;
};

struct QuantityRow {
  std::string family;
  double theta;
  std::string quantity;  // "G" | "F"
  double theory;
  double exp_value, exp_err;
  double sim_ideal, sim_ideal_se;
  double sim_imperfect, sim_imperfect_se;
  bool ideal_ok;
  bool bracket_ok;
};

int do_reproduce(const Options& opt) {
  if (opt.trials < 1) {
    std::cerr << "error: --trials must be at least 1\n";
    return kUsageError;
  }
  const double quarter = MeasurementStrength::max_radians();
  const std::vector<HeadlineSetting> settings{
      {"universal", 0.0, 0.666, 0.001, 0.654, 0.004},
      {"universal", quarter, 0.507, 0.004, 0.929, 0.002},
      {"covariant", 0.0, 0.750, 0.001, 0.735, 0.004},
      {"covariant", quarter, 0.511, 0.006, 0.945, 0.003},
  };

  std::vector<QuantityRow> rows;
  std::uint64_t run_index = 0;
  bool all_ok = true;
  for (const auto& s : settings) {
    const bool universal = s.family == "universal";
    const auto& states = universal ? universal_six() : covariant_four();
    const MeasurementStrength theta(s.theta);
    const TradeoffPoint theory = average_tradeoff(
        theta, EnsembleSpec{universal ? EnsembleFamily::UniversalHaar
                                      : EnsembleFamily::CovariantEquatorial,
                            0});

    EnsembleRunRow sims[2];
    const PbsModel models[2] = {PbsModel::ideal(), PbsModel(0.03, 1.0)};
    for (int column = 0; column < 2; ++column) {
      std::vector<EnsembleRunRow> state_rows;
      for (const auto& state : states) {
        state_rows.push_back(state_row(state, theta, models[column],
                                       opt.trials, mix_seed(opt.seed,
                                                            run_index++),
                                       true, opt.workers));
      }
      sims[column] = average_row(state_rows);
    }

    const auto make_row = [&](const std::string& quantity, double theory_v,
                              double exp_v, double exp_err, double ideal_v,
                              double ideal_se, double imp_v, double imp_se) {
      QuantityRow row;
      row.family = s.family;
      row.theta = s.theta;
      row.quantity = quantity;
      row.theory = theory_v;
      row.exp_value = exp_v;
      row.exp_err = exp_err;
      row.sim_ideal = ideal_v;
      row.sim_ideal_se = ideal_se;
      row.sim_imperfect = imp_v;
      row.sim_imperfect_se = imp_se;
      row.ideal_ok =
          std::abs(ideal_v - theory_v) <= std::max(3.0 * ideal_se, 1e-9);
      // In-bracket: between the measured point minus three error bars and the
      // theory value, with sampling-noise slack.
      const double lower = exp_v - 3.0 * exp_err;
      row.bracket_ok = (imp_v + 3.0 * imp_se >= lower) &&
                       (imp_v - 3.0 * imp_se <= theory_v + 1e-9);
      return row;
    };

    rows.push_back(make_row("G", theory.g, s.exp_g, s.exp_g_err, sims[0].g,
                            sims[0].se_g, sims[1].g, sims[1].se_g));
    rows.push_back(make_row("F", theory.f, s.exp_f, s.exp_f_err, sims[0].f,
                            sims[0].se_f, sims[1].f, sims[1].se_f));
  }

  std::ostringstream csv;
  csv << "family,theta,quantity,theory,experiment,experiment_err,sim_ideal,"
         "sim_ideal_stderr,sim_imperfect,sim_imperfect_stderr,"
         "ideal_within_3sigma,imperfect_in_bracket\n";
  for (const auto& r : rows) {
    all_ok = all_ok && r.ideal_ok && r.bracket_ok;
    csv << r.family << ',' << fmt6(r.theta) << ',' << r.quantity << ','
        << fmt6(r.theory) << ',' << fmt6(r.exp_value) << ','
        << fmt6(r.exp_err) << ',' << fmt6(r.sim_ideal) << ','
        << fmt6(r.sim_ideal_se) << ',' << fmt6(r.sim_imperfect) << ','
        << fmt6(r.sim_imperfect_se) << ',' << (r.ideal_ok ? 1 : 0) << ','
        << (r.bracket_ok ? 1 : 0) << '\n';
  }
  if (const int rc = write_text_file(opt.out, csv.str()); rc != kOk) return rc;

  json manifest = base_manifest("reproduce", opt);
  manifest["config"]["trials"] = opt.trials;
  manifest["config"]["imperfect_r_h"] = 0.03;
  if (const int rc = write_manifest(opt.out, manifest); rc != kOk) return rc;

  if (!all_ok) {
    std::cerr << "reproduce: one or more comparisons failed (see "
              << opt.out << ")\n";
    return kComparisonFailure;
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Minimal-disturbance measurement simulator"};
  app.set_config("--config");
  app.require_subcommand(1);

  Options opt;
  int rc = kOk;

  const auto add_theta = [&](CLI::App* cmd) -> CLI::Option* {
    auto* t = cmd->add_option("--theta", opt.theta,
                              "readout strength in radians, in [0, pi/4]");
    auto* f = cmd->add_option("--theta-frac", opt.theta_frac,
                              "readout strength as a fraction k/n of pi");
    t->excludes(f);
    f->excludes(t);
    return t;
  };
  const auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--trials", opt.trials, "shots per state");
    cmd->add_option("--seed", opt.seed, "master random seed");
    cmd->add_option("--workers", opt.workers, "worker threads")
        ->check(CLI::Range(1, 1024));
  };

  auto* curve = app.add_subcommand("curve", "emit a frontier curve as CSV");
  curve->add_option("--family", opt.family, "universal | covariant")
      ->required();
  curve->add_option("--points", opt.points, "number of grid points (>= 2)");
  curve->add_option("--out", opt.out, "output CSV path")->required();

  auto* experiment = app.add_subcommand(
      "experiment", "simulate counting runs over a state ensemble");
  CLI::Option* experiment_theta = add_theta(experiment);
  experiment->add_option("--ensemble", opt.ensemble,
                         "universal6 | covariant4 | haar | equatorial")
      ->required();
  experiment->add_option("--rh", opt.r_h, "H intensity reflectivity (ideal 0)")
      ->check(CLI::Range(0.0, 1.0));
  experiment->add_option("--rv", opt.r_v, "V intensity reflectivity (ideal 1)")
      ->check(CLI::Range(0.0, 1.0));
  experiment->add_flag("--no-feed-forward", opt.no_feed_forward,
                       "disable the conditional sigma_Z correction");
  add_run_flags(experiment);
  experiment->add_option("--out", opt.out, "output CSV path")->required();

  auto* mc = app.add_subcommand("mc-average",
                                "Monte Carlo ensemble average of the exact "
                                "channel values");
  CLI::Option* mc_theta = add_theta(mc);
  mc->add_option("--ensemble", opt.ensemble, "haar | equatorial")->required();
  add_run_flags(mc);
  mc->add_option("--out", opt.out, "output CSV path (stdout if omitted)");

  auto* reproduce = app.add_subcommand(
      "reproduce", "run the four headline settings, ideal and imperfect");
  add_run_flags(reproduce);
  reproduce->add_option("--out", opt.out, "output CSV path")->required();

  curve->final_callback([&] { rc = do_curve(opt); });
  experiment->final_callback([&, experiment_theta] {
    opt.theta_set = experiment_theta->count() > 0;
    rc = do_experiment(opt);
  });
  mc->final_callback([&, mc_theta] {
    opt.theta_set = mc_theta->count() > 0;
    rc = do_mc_average(opt);
  });
  reproduce->final_callback([&, reproduce] {
    if (reproduce->get_option("--trials")->count() == 0) opt.trials = 1000000;
    rc = do_reproduce(opt);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  }
  return rc;
}

}  // namespace mdm::cli
