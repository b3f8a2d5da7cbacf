#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lamewave/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Traveling-wave Green tensors of the Lame equations"};
  app.set_version_flag("--version", std::string(lamewave::kVersion));
  app.require_subcommand(1);

  std::string config, out;
  CLI::App* run = app.add_subcommand("run", "Execute the task selected by the config's 'task' key");
  run->add_option("--config", config, "JSON run configuration")->required();
  run->add_option("--out", out, "Output directory (created if missing)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // usage errors share the config-error exit status
    return code == 0 ? 0 : lamewave::kExitConfig;
  }
  return lamewave::cli_run(config, out);
}
