// Scenario runner: simulate, compare and check subcommands.

#include <CLI11.hpp>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>

#include "wip/wip.hpp"

namespace {

enum ExitCode : int { kOk = 0, kConfigError = 2, kSimulationError = 3, kCheckFailed = 4 };

struct Options {
  std::string config;
  std::string model;
  std::string out;
  bool quiet = false;
};

/// Writes to the named file, or to stdout when the path is empty or "-".
bool emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return static_cast<bool>(std::cout);
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  return static_cast<bool>(f);
}

wip::Trajectory run(wip::Model m, const wip::ScenarioConfig& cfg) {
  return wip::simulate(m, cfg.initial, cfg.torques, cfg.duration, cfg.dt, cfg.params);
}

int cmd_simulate(const Options& opt) {
  const wip::ScenarioConfig cfg = wip::load_config(opt.config);
  wip::Model model = cfg.model.value_or(wip::Model::Full);
  if (!opt.model.empty()) model = wip::parse_model(opt.model);

  const wip::Trajectory traj = run(model, cfg);
  std::ostringstream csv;
  wip::write_csv(csv, traj);
  if (!emit(opt.out, csv.str())) {
    std::cerr << "error: cannot write '" << opt.out << "'\n";
    return kConfigError;
  }
  if (!opt.quiet && !(opt.out.empty() || opt.out == "-")) {
    std::cerr << "wrote " << traj.samples.size() << " samples (" << wip::to_string(model)
              << ") to " << opt.out << '\n';
  }
  return kOk;
}

int cmd_compare(const Options& opt) {
  const wip::ScenarioConfig cfg = wip::load_config(opt.config);
  if (!cfg.max_abs_error) throw wip::ConfigError("tolerances.max_abs_error: missing required key");

  auto launch = [&](wip::Model m) { return std::async(std::launch::async, run, m, std::cref(cfg)); };
  auto full_f = launch(wip::Model::Full);
  auto reduced_f = launch(wip::Model::Reduced);
  auto oracle_f = launch(wip::Model::Oracle);
  const wip::Trajectory full = full_f.get();
  const wip::Trajectory reduced = reduced_f.get();
  const wip::Trajectory oracle = oracle_f.get();

  const std::vector<wip::ComparisonReport> reports = {
      wip::compare_trajectories(full, reduced, "full_vs_reduced"),
      wip::compare_trajectories(full, oracle, "full_vs_oracle"),
      wip::compare_trajectories(reduced, oracle, "reduced_vs_oracle")};

  bool within = true;
  for (const auto& r : reports) within = within && r.max_abs() <= *cfg.max_abs_error;

  std::string kv = wip::render_key_value(reports);
  kv += "tolerance=" + wip::format_number(*cfg.max_abs_error) + '\n';
  kv += std::string("status=") + (within ? "pass" : "fail") + '\n';
  if (!emit(opt.out, kv)) {
    std::cerr << "error: cannot write '" << opt.out << "'\n";
    return kConfigError;
  }
  if (!opt.quiet) {
    std::cerr << wip::render_text(reports);
    std::cerr << (within ? "all errors within " : "tolerance exceeded: ")
              << wip::format_number(*cfg.max_abs_error) << '\n';
  }
  return within ? kOk : kCheckFailed;
}

int cmd_check(const Options& opt) {
  const wip::ScenarioConfig cfg = wip::load_config(opt.config);
  bool ok = true;
  std::string lines;
  for (const wip::CheckResult& c : wip::structural_suite(cfg.params)) {
    ok = ok && c.passed;
    lines += wip::render_check(c) + '\n';
  }
  if (!opt.out.empty()) {
    emit(opt.out, lines);
  }
  if (!opt.quiet) std::cout << lines;
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wheeled inverted pendulum simulator"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "scenario JSON file")->required();
    sub->add_option("--out", opt.out, "output file (default stdout)");
    sub->add_flag("--quiet", opt.quiet, "suppress progress and summaries");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "integrate one model and write CSV");
  add_common(simulate);
  simulate->add_option("--model", opt.model, "full, reduced or oracle")
      ->check(CLI::IsMember({"full", "reduced", "oracle"}));

  CLI::App* compare = app.add_subcommand("compare", "run all three models and report differences");
  add_common(compare);

  CLI::App* check = app.add_subcommand("check", "run the structural check suite");
  add_common(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*simulate) return cmd_simulate(opt);
    if (*compare) return cmd_compare(opt);
    return cmd_check(opt);
  } catch (const wip::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const wip::SimulationError& e) {
    std::cerr << "simulation failed at t=" << wip::format_number(e.time()) << ": " << e.what()
              << '\n';
    return kSimulationError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return kConfigError;
  }
}
