#include <CLI11.hpp>
#include <iostream>

#include "fdia/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stealthy-FDIA defense laboratory for a feedback-linearized "
               "7-DOF manipulator"};
  app.require_subcommand(1);

  fdia::RunOptions run_opt;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("scenario", run_opt.scenario_id,
                    "Scenario id (A1, A2, A3, B1, B2, B3, B4)")
        ->required();
    cmd->add_option("--config", run_opt.config_path, "Config file (JSON)");
    cmd->add_option("--override", run_opt.overrides,
                    "Config override key.path=value (repeatable)");
    cmd->add_option("--seed", run_opt.seed, "Base RNG seed");
    cmd->add_option("--out", run_opt.out_dir, "Output directory");
    cmd->add_option("--decimate", run_opt.decimate,
                    "Keep every k-th trace row (default from config)");
  };

  CLI::App* run = app.add_subcommand("run", "Run one scenario; write trace + metrics");
  add_common(run);

  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo over seeded runs");
  add_common(mc);
  mc->add_option("--runs", run_opt.runs, "Run count (default from config)");

  fdia::CalibrateOptions cal_opt;
  CLI::App* cal = app.add_subcommand(
      "calibrate", "Map between tau, alpha_F and ARL for the chi2 detector");
  cal->add_option("--tau", cal_opt.tau, "Alarm threshold");
  cal->add_option("--alpha", cal_opt.alpha_F, "Per-step false-alarm probability");
  cal->add_option("--arl", cal_opt.arl, "Average run length in samples");
  cal->add_option("--ts", cal_opt.Ts, "Sample time for the hours conversion");
  cal->add_option("--dof", cal_opt.dof, "Chi2 degrees of freedom (default 14)");

  std::string report_dir = ".";
  CLI::App* rep = app.add_subcommand("report",
                                     "Comparison table across scenario outputs");
  rep->add_option("dir", report_dir, "Directory holding <id>_metrics.json files");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return fdia::cmd_run(run_opt, std::cout, std::cerr);
  if (mc->parsed()) return fdia::cmd_mc(run_opt, std::cout, std::cerr);
  if (cal->parsed()) return fdia::cmd_calibrate(cal_opt, std::cout, std::cerr);
  if (rep->parsed()) return fdia::cmd_report(report_dir, std::cout, std::cerr);
  return 1;
}
