#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "fdia/scenario.hpp"
#include "fdia/world.hpp"

namespace fdia {

// All run parameters, loaded from a single JSON config file (the kinematic
// chain comes from an included chain file). Unknown keys are rejected so typos
// surface at load time; errors name the offending key path.
struct RunConfig {
  nlohmann::json raw;          // normalized effective config
  std::string config_dir;      // directory of the loaded file (chain include)

  // plant
  int n = 7;
  double Ts = 0.01;
  double q_c = 1e-6;
  double sigma_q = 5e-5;
  double sigma_qd = 1e-2;
  Vec u_max;

  // detector
  double tau = 71.5735;

  // damping
  double rho_max = 1.2;
  double rho_y = 0.01;
  double exp_m = 2.0;
  double psi = 0.99;
  double eps_vel = 1e-4;

  ManipConfig manip;

  // controller
  double lqr_q_pos = 100.0;
  double lqr_q_vel = 10.0;
  double lqr_r = 1.0;
  double c_w = 1.0;

  // attacker
  double attacker_kp = 4.0;
  double attacker_kd = 4.0;
  double attacker_zeta = 1e-2;
  double attacker_fd_q = fd::kSensorPosStep;
  double attacker_fd_qd = fd::kSensorVelStep;

  // scenario
  int T = 5000;
  Vec q0;
  double circle_sweep = 0.0;  // rad; defaulted to pi at load
  int mc_runs_a = 100;
  int mc_runs_b = 1;
  int resync_interval = 0;

  // output
  int decimate = 1;

  KinematicChain chain;
};

/// Default configuration (no file needed); chain is the built-in 7-DOF arm.
RunConfig default_config();

/// Loads and validates a config file, applying `overrides` ("a.b.c=value").
RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides = {});

/// Applies overrides to an in-memory config (re-normalizes and re-validates).
RunConfig apply_overrides(const RunConfig& rc,
                          const std::vector<std::string>& overrides);

/// Effective config as JSON (round-trips through parse_config).
nlohmann::json config_to_json(const RunConfig& rc);

/// Builds a RunConfig from a JSON object (chain file resolved against dir).
RunConfig parse_config(const nlohmann::json& j, const std::string& dir);

KinematicChain load_chain(const std::string& path);
KinematicChain builtin_chain();

/// Assembles the immutable per-scenario world configuration (gains solved,
/// covariance table precomputed, task plans anchored at FK(q0)).
std::shared_ptr<const WorldConfig> build_world_config(const RunConfig& rc,
                                                      const ScenarioConfig& sc);

}  // namespace fdia
