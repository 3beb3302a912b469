// Command-line front end: scenario runs, static-test identification, config checks.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "tailsitter/config.hpp"
#include "tailsitter/error.hpp"
#include "tailsitter/simulation.hpp"
#include "tailsitter/sysid.hpp"

namespace {

using namespace tailsitter;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct RunOptions {
  std::vector<std::string> configs;
  std::optional<std::string> scenario;
  std::optional<double> duration;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> estimator;
  std::string out_log;
  std::string out_metrics;
  bool no_disturbance = false;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::kIo, "cannot write " + path);
  return out;
}

int run_command(const RunOptions& opt) {
  KeyValues overrides;
  if (opt.scenario) overrides["scenario"] = *opt.scenario;
  if (opt.duration) overrides["duration"] = fmt::format("{:.17g}", *opt.duration);
  if (opt.seed) overrides["seed"] = std::to_string(*opt.seed);
  if (opt.estimator) overrides["estimator"] = *opt.estimator;

  Config config = load_config(opt.configs);
  config = apply_key_values(overrides, config, false);
  if (opt.no_disturbance) {
    const auto seed = config.disturbance.seed;
    config.disturbance = DisturbanceSpec::none();
    config.disturbance.seed = seed;
  }

  const ScenarioResult result = run_scenario(config);
  if (!opt.out_log.empty()) {
    auto out = open_output(opt.out_log);
    write_log_csv(out, result.log);
  }
  const std::string json = metrics_json(result.metrics);
  if (!opt.out_metrics.empty()) {
    auto out = open_output(opt.out_metrics);
    out << json << '\n';
  } else {
    std::cout << json << '\n';
  }
  return 0;
}

int fit_command(const std::string& in_path, const std::string& out_path, bool intercept,
                const std::string& side) {
  std::ifstream in(in_path);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open " + in_path);
  sysid::FitOptions options;
  options.intercept = intercept;
  options.reaction_sign = side == "right" ? -1.0 : 1.0;
  const sysid::FitResult result = sysid::fit_params(sysid::read_csv(in), options);
  result.require_complete();
  if (out_path.empty()) {
    sysid::write_param_file(std::cout, result);
  } else {
    auto out = open_output(out_path);
    sysid::write_param_file(out, result);
  }
  return 0;
}

int synth_command(const std::vector<std::string>& configs, const std::string& out_path,
                  std::uint64_t seed, double noise, const std::string& side) {
  const Config config = load_config(configs);
  const auto records = sysid::generate_synthetic(
      config.vehicle, sysid::default_omega_grid(), sysid::default_delta_grid(),
      sysid::NoiseSpec{noise}, seed, side == "right" ? Side::kRight : Side::kLeft);
  if (out_path.empty()) {
    sysid::write_csv(std::cout, records);
  } else {
    auto out = open_output(out_path);
    sysid::write_csv(out, records);
  }
  return 0;
}

int validate_command(const std::vector<std::string>& configs) {
  load_config(configs);
  std::cout << "ok\n";
  return 0;
}

int defaults_command(const std::string& out_path) {
  if (out_path.empty()) {
    write_config(std::cout, Config{});
  } else {
    auto out = open_output(out_path);
    write_config(out, Config{});
  }
  return 0;
}

int report(const Error& e) {
  std::cerr << "error: " << category_name(e.category()) << ": " << e.what() << '\n';
  return e.category() == ErrorCategory::kUsage ? kExitUsage : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tail-sitter simulator, controller and identification tools"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Simulate a closed-loop scenario");
  run_cmd->add_option("--config", run.configs, "Configuration file(s); later files override earlier ones");
  run_cmd->add_option("--scenario", run.scenario, "hover | waypoint | circle | star");
  run_cmd->add_option("--duration", run.duration, "Scenario duration, s");
  run_cmd->add_option("--seed", run.seed, "Random seed");
  run_cmd->add_option("--estimator", run.estimator, "perfect | complementary");
  run_cmd->add_option("--out-log", run.out_log, "CSV log path");
  run_cmd->add_option("--out-metrics", run.out_metrics, "JSON metrics path (stdout if omitted)");
  run_cmd->add_flag("--no-disturbance", run.no_disturbance, "Zero every noise and disturbance term");

  auto* sysid_cmd = app.add_subcommand("sysid", "Static-test identification");
  sysid_cmd->require_subcommand(1);

  std::string fit_in;
  std::string fit_out;
  bool fit_intercept = false;
  std::string fit_side = "left";
  auto* fit_cmd = sysid_cmd->add_subcommand("fit", "Fit constants from a static-test CSV");
  fit_cmd->add_option("--in", fit_in, "Static-test CSV")->required();
  fit_cmd->add_option("--out", fit_out, "Parameter file (stdout if omitted)");
  fit_cmd->add_flag("--intercept", fit_intercept, "Also fit and report a bias per regression");
  fit_cmd->add_option("--side", fit_side, "Side of the tested unit")->check(CLI::IsMember({"left", "right"}));

  std::vector<std::string> synth_configs;
  std::string synth_out;
  std::uint64_t synth_seed = 1;
  double synth_noise = 0.0;
  std::string synth_side = "left";
  auto* synth_cmd = sysid_cmd->add_subcommand("synth", "Generate a synthetic static-test CSV");
  synth_cmd->add_option("--config", synth_configs, "Configuration file(s) supplying the constants");
  synth_cmd->add_option("--out", synth_out, "CSV path (stdout if omitted)");
  synth_cmd->add_option("--seed", synth_seed, "Random seed");
  synth_cmd->add_option("--noise", synth_noise, "Relative measurement noise std")->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--side", synth_side, "Side of the simulated unit")->check(CLI::IsMember({"left", "right"}));

  std::vector<std::string> validate_configs;
  auto* validate_cmd = app.add_subcommand("validate", "Check configuration file(s) and exit");
  validate_cmd->add_option("--config", validate_configs, "Configuration file(s)")->required();

  std::string defaults_out;
  auto* defaults_cmd = app.add_subcommand("defaults", "Print the built-in configuration as a config file");
  defaults_cmd->add_option("--out", defaults_out, "Output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << '\n' << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (*run_cmd) return run_command(run);
    if (*fit_cmd) return fit_command(fit_in, fit_out, fit_intercept, fit_side);
    if (*synth_cmd) return synth_command(synth_configs, synth_out, synth_seed, synth_noise, synth_side);
    if (*validate_cmd) return validate_command(validate_configs);
    if (*defaults_cmd) return defaults_command(defaults_out);
  } catch (const Error& e) {
    return report(e);
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
