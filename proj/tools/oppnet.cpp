#include "oppnet/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace oppnet;

namespace {

int run_config_command(const std::string& path, const std::string& emit_path, std::ostream& out,
                       int (*command)(const cli::ExperimentConfig&, std::ostream&)) {
  const auto config = cli::load_config(path);
  if (!emit_path.empty()) {
    std::ofstream emitted(emit_path);
    if (!emitted) throw cli::ConfigError(emit_path + ": cannot write effective config");
    emitted << cli::emit_config(config);
  }
  return command(config, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Opportunistic routing analysis and simulation"};
  app.require_subcommand(1);

  std::string out_path;
  app.add_option("--out", out_path, "Write results to this file instead of stdout");

  std::string config_path;
  std::string emit_path;
  std::string grid_spec;

  struct Entry {
    const char* name;
    const char* help;
    int (*fn)(const cli::ExperimentConfig&, std::ostream&);
  };
  const Entry entries[] = {
      {"analyze", "Closed-form link, node and forwarder-set metrics as JSON lines", cli::cmd_analyze},
      {"simulate", "Run the delivery simulation, one JSON record per protocol mode", cli::cmd_simulate},
      {"sweep", "Single-axis parameter sweep as CSV", cli::cmd_sweep},
      {"topology", "Print the resolved topology in text form", cli::cmd_topology},
  };
  std::vector<std::pair<CLI::App*, const Entry*>> commands;
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("config", config_path, "YAML experiment config")->required();
    sub->add_option("--emit-config", emit_path, "Write the effective config (canonical YAML) here");
    sub->fallthrough();
    commands.emplace_back(sub, &e);
  }
  auto* verify = app.add_subcommand("verify", "Check closed forms against brute-force references");
  verify->add_option("--grid", grid_spec, "Grid overrides, e.g. sizes=1-3;probs=0,0.5,1;costs=0,1");
  verify->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kSuccess : cli::kConfigError;
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return cli::kConfigError;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : file;

  try {
    if (verify->parsed()) return cli::cmd_verify(cli::parse_grid(grid_spec), out);
    for (const auto& [sub, entry] : commands) {
      if (sub->parsed()) return run_config_command(config_path, emit_path, out, entry->fn);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kConfigError;
  }
  return cli::kConfigError;
}
