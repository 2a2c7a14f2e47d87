#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "rockrelax/errors.hpp"
#include "rockrelax/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Rockafellian relaxation experiments"};
  app.require_subcommand(1);

  rockrelax::RunOptions options;
  std::string out_dir;
  std::string formats = "csv,json";
  std::optional<std::uint64_t> seed;

  CLI::App* run = app.add_subcommand("run", "Sweep nu for a plan and write reports");
  run->add_option("--plan", options.plan, "Plan file or builtin:NAME (ex21, ex22, ex23)")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_flag("--oracle", options.oracle, "Check every solve against the grid oracle");
  run->add_option("--seed", seed, "Base seed");
  run->add_option("--format", formats, "Comma-separated subset of csv,json,plotdata");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rockrelax::kExitConfigError;
  }

  try {
    options.formats = rockrelax::parse_formats(formats);
  } catch (const rockrelax::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return rockrelax::kExitConfigError;
  }
  options.out_dir = out_dir;
  options.seed = seed;
  return rockrelax::run_command(options, std::cerr);
}
