// tfpm command-line driver.
//
// Subcommands (each takes --config PATH, --out DIR, --quiet):
//   run          evolve one configured problem; norms CSV + snapshots + manifest
//   convergence  tau-refinement study of the dual-norm error
//   decay-study  decay-slope fits over an (alpha, m) grid
//   fode-table   scalar fractional-ODE table with envelopes
//   harnack      boundary band of a big-data run
//   verify       pass/fail table over the whole theorem battery
//
// The TFPM_OUT environment variable overrides the configured output
// directory; an explicit --out overrides both.  Exit codes: 0 success,
// 1 failed checks, 2 configuration problems, 3 solver failures.

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "tfpm/tfpm.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  bool quiet = false;
};

void attach(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out_dir, "output directory (overrides config and TFPM_OUT)");
  cmd->add_flag("--quiet", args.quiet, "suppress progress output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tfpm: solver and verification suite for time-fractional porous-medium-type "
               "equations"};
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* cmd_run = app.add_subcommand("run", "evolve one configured problem");
  CLI::App* cmd_conv = app.add_subcommand("convergence", "tau-refinement error study");
  CLI::App* cmd_decay = app.add_subcommand("decay-study", "decay slopes over an (alpha,m) grid");
  CLI::App* cmd_fode = app.add_subcommand("fode-table", "scalar fractional-ODE table");
  CLI::App* cmd_harnack = app.add_subcommand("harnack", "boundary band of a big-data run");
  CLI::App* cmd_verify = app.add_subcommand("verify", "run the theorem check battery");
  for (CLI::App* c : {cmd_run, cmd_conv, cmd_decay, cmd_fode, cmd_harnack, cmd_verify})
    attach(c, args);

  CLI11_PARSE(app, argc, argv);

  try {
    const tfpm::Config cfg = tfpm::Config::from_file(args.config_path);
    if (cmd_run->parsed()) {
      tfpm::run_experiment(cfg, args.out_dir, args.quiet);
      return 0;
    }
    if (cmd_conv->parsed()) {
      const auto result = tfpm::run_convergence(cfg, args.out_dir, args.quiet);
      return result.pass ? 0 : 1;
    }
    if (cmd_decay->parsed()) {
      tfpm::run_decay_study(cfg, args.out_dir, args.quiet);
      return 0;
    }
    if (cmd_fode->parsed()) {
      tfpm::run_fode_table(cfg, args.out_dir, args.quiet);
      return 0;
    }
    if (cmd_harnack->parsed()) {
      tfpm::run_harnack(cfg, args.out_dir, args.quiet);
      return 0;
    }
    if (cmd_verify->parsed()) {
      const auto summary = tfpm::run_verify(cfg, args.out_dir, args.quiet);
      return summary.all_pass ? 0 : 1;
    }
  } catch (const tfpm::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const tfpm::SolverError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
