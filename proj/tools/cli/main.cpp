#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"schrolab: numerical experiments for Schrodinger-operator harmonic analysis"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::vector<std::string> overrides;
  for (const auto& name : schrolab::cli::subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("-c,--config", config_path, "config file (JSON, comments allowed)");
    sub->add_option("overrides", overrides, "key.path=value overrides");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  return schrolab::cli::run_guarded(name, config_path, overrides, std::cout, std::cerr);
}
