// doawb: closed-loop anesthesia control workbench.
//
//   doawb tune     --config FILE --out DIR --variant V [--seed N]
//   doawb evaluate --config FILE --out DIR --controller FILE
//   doawb compare  --config FILE --out DIR --controller A --controller B
//   doawb replay   --config FILE --out DIR
//
// Exit codes: 0 success, 2 config error, 3 numeric failure.

#include <CLI11.hpp>
#include <iostream>

#include "doa/cli.hpp"
#include "doa/errors.hpp"

namespace {

void add_common(CLI::App* cmd, doa::RunManifest& m, std::string& variant, bool& serial) {
  cmd->add_option("--config", m.config_path, "experiment config file")->required();
  cmd->add_option("--out", m.output_dir, "output directory")->required();
  cmd->add_option("--seed", m.seed_override, "override the WOA seed");
  cmd->add_option("--variant", variant, "controller variant (pid|fopid|fofpid)");
  cmd->add_flag("--serial", serial, "run cohort/fitness sweeps on the serial reference path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Depth-of-anesthesia control workbench: PK/PD simulation, "
               "PID/FOPID/FOFPID controllers, WOA tuning"};
  app.require_subcommand(1);

  doa::RunManifest manifest;
  std::string variant_str;
  bool serial = false;

  CLI::App* tune = app.add_subcommand("tune", "optimize a controller on the cohort");
  CLI::App* evaluate = app.add_subcommand("evaluate", "run a saved controller over the cohort");
  CLI::App* compare = app.add_subcommand("compare", "side-by-side report for two controllers");
  CLI::App* replay = app.add_subcommand("replay", "verify summary.csv against trajectories");

  for (CLI::App* cmd : {tune, evaluate, compare, replay}) {
    add_common(cmd, manifest, variant_str, serial);
  }
  evaluate->add_option("--controller", manifest.controller_files, "controller file")
      ->expected(1);
  compare->add_option("--controller", manifest.controller_files, "controller files (two)")
      ->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    manifest.exec = serial ? doa::ExecMode::serial : doa::ExecMode::openmp;
    if (!variant_str.empty()) manifest.variant = doa::variant_from_string(variant_str);

    if (tune->parsed()) doa::cmd_tune(manifest);
    else if (evaluate->parsed()) doa::cmd_evaluate(manifest);
    else if (compare->parsed()) doa::cmd_compare(manifest);
    else if (replay->parsed()) doa::cmd_replay(manifest);
    return 0;
  } catch (const doa::NumericError& ex) {
    std::cerr << "numeric failure: " << ex.what() << '\n';
    return 3;
  } catch (const doa::ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << '\n';
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  }
}
