#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "pi01/cli.hpp"
#include "pi01/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Property checks for finite tree and functional constructions"};
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  app.add_option("--scenario", scenario_path, "Scenario file");
  app.add_option("--seed", seed, "Override the scenario seed");
  app.prefix_command();
  app.footer("Commands: verify twocol|nice|kappa, run cupping|traceable|smc|pi6, check thin|split|weaksplit|theta,\n"
             "trace from-thin|rescale|from-split|dnr, encode sd N M, suite fast|full");
  CLI11_PARSE(app, argc, argv);
  const auto command = app.remaining();

  try {
    pi01::Scenario scenario;
    if (!scenario_path.empty()) {
      std::ifstream in(scenario_path);
      if (!in) throw pi01::Error(pi01::ErrorKind::format, "cannot open " + scenario_path);
      std::ostringstream text;
      text << in.rdbuf();
      scenario = pi01::parse_scenario(text.str());
    }
    if (seed) scenario.seed = *seed;
    std::string cmd;
    for (const auto& w : command) cmd += (cmd.empty() ? "" : " ") + w;
    const auto report = pi01::run_command(cmd, scenario);
    std::cout << report.render();
    return report.exit_code();
  } catch (const pi01::Error& e) {
    std::cerr << "error: " << pi01::to_string(e.kind()) << ": " << e.what() << "\n";
    return 2;
  }
}
