#pragma once

// Command-line front end:
//
//   imbalance run --scenario <path> [--out <path>] [--format csv|json] [--seed <u64>] [--quiet]
//
// Exit codes: 0 success (a Breakdown or a missing power chain is a recorded
// outcome, not a failure), 1 scenario or usage errors, 2 runtime errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "imbalance/io/report.hpp"
#include "imbalance/io/scenario.hpp"

namespace imbalance::io {

enum ExitCode : int { kExitOk = 0, kExitScenario = 1, kExitRuntime = 2 };

struct RunOptions {
  std::string scenario_path;
  std::optional<std::string> out_path;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

inline std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Loads, runs and writes one scenario. Never throws.
inline int execute_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  Scenario scenario;
  try {
    const auto text = read_file(opt.scenario_path);
    if (!text) {
      err << "error: cannot read scenario file '" << opt.scenario_path << "'\n";
      return kExitScenario;
    }
    scenario = parse_scenario(*text);
  } catch (const ScenarioError& e) {
    err << "error: " << opt.scenario_path << ": " << e.what() << "\n";
    return kExitScenario;
  }

  if (opt.seed) {
    if (auto* soc = std::get_if<SocietyConfig>(&scenario.body)) {
      soc->seed = *opt.seed;
    } else if (!opt.quiet) {
      err << "note: --seed ignored for " << to_string(scenario.kind()) << " scenarios\n";
    }
  }

  std::string payload;
  try {
    RunResult result = run_scenario(scenario);
    payload = opt.format == "csv" ? result.csv : report_to_json(result.report).dump(2) + "\n";
  } catch (const Error& e) {
    err << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }

  if (opt.out_path) {
    std::ofstream f(*opt.out_path, std::ios::binary);
    if (!f || !(f << payload) || !f.flush()) {
      err << "runtime error: cannot write '" << *opt.out_path << "'\n";
      return kExitRuntime;
    }
  } else {
    out << payload;
    out.flush();
  }
  if (!opt.quiet) err << "ok: " << to_string(scenario.kind()) << " scenario '" << opt.scenario_path << "'\n";
  return kExitOk;
}

/// `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bilateral exchange simulator under motivation and power imbalances", "imbalance"};
  app.require_subcommand(1);

  RunOptions opt;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario file");
  run_cmd->add_option("--scenario", opt.scenario_path, "Scenario JSON file")->required();
  run_cmd->add_option("--out", opt.out_path, "Write the report here instead of stdout");
  run_cmd->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_option("--seed", opt.seed, "Override the scenario seed (society scenarios)");
  run_cmd->add_flag("--quiet", opt.quiet, "Suppress diagnostic notes");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      out << app.help();
      return kExitOk;
    }
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitScenario;
  }
  return execute_run(opt, out, err);
}

}  // namespace imbalance::io
