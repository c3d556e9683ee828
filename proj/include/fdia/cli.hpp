#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdia/config.hpp"

namespace fdia {

// Implementations behind the CLI subcommands; the binary in tools/ only
// parses arguments. All commands return a process exit status and print
// diagnostics to the given streams.

struct RunOptions {
  std::string config_path;  // empty = built-in defaults
  std::vector<std::string> overrides;
  std::string scenario_id;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  int decimate = 0;  // 0 = take from config
  int runs = 0;      // mc only; 0 = scenario default
};

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err);
int cmd_mc(const RunOptions& opt, std::ostream& out, std::ostream& err);

struct CalibrateOptions {
  double alpha_F = 0.0;  // one of alpha_F / tau / arl must be set
  double tau = 0.0;
  double arl = 0.0;      // samples
  double Ts = 0.01;      // for the hours conversion
  int dof = 14;
};

int cmd_calibrate(const CalibrateOptions& opt, std::ostream& out, std::ostream& err);

int cmd_report(const std::string& run_dir, std::ostream& out, std::ostream& err);

}  // namespace fdia
