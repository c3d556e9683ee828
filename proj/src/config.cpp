#include "fdia/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include "fdia/chi2.hpp"

namespace fdia {

using nlohmann::json;

namespace {

double num(const json& j, const std::string& section, const std::string& key,
           double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  ensure(v.is_number(), "config: " + section + "." + key + " must be a number");
  return v.get<double>();
}

Vec vec_field(const json& j, const std::string& section, const std::string& key,
              const Vec& fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  ensure(v.is_array(), "config: " + section + "." + key + " must be an array");
  Vec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i].get<double>();
  return out;
}

void reject_unknown(const json& j, const std::string& section,
                    const std::set<std::string>& known) {
  for (auto it = j.begin(); it != j.end(); ++it)
    ensure(known.count(it.key()) > 0,
           "config: unknown key " + (section.empty() ? it.key() : section + "." + it.key()));
}

json chain_to_json(const KinematicChain& chain) {
  json rows = json::array();
  for (const DhRow& r : chain.rows)
    rows.push_back({{"a", r.a}, {"alpha", r.alpha}, {"d", r.d},
                    {"theta_offset", r.theta_offset}});
  return {{"dh", rows}};
}

}  // namespace

KinematicChain builtin_chain() {
  // Gen3-like 7-DOF spherical-roll arm: alternating +-pi/2 twists, all link
  // lengths in the d offsets. Repo-chosen parameters, validated against
  // finite-difference oracles rather than vendor data.
  KinematicChain chain;
  const double hp = std::numbers::pi / 2.0;
  chain.rows = {
      {0.0, hp, 0.2848, 0.0}, {0.0, -hp, 0.0, 0.0}, {0.0, hp, 0.4208, 0.0},
      {0.0, -hp, 0.0, 0.0},   {0.0, hp, 0.3143, 0.0}, {0.0, -hp, 0.0, 0.0},
      {0.0, 0.0, 0.1674, 0.0}};
  return chain;
}

KinematicChain load_chain(const std::string& path) {
  std::ifstream in(path);
  ensure(in.good(), "config: cannot open chain file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("config: chain file " + path + ": " + e.what());
  }
  reject_unknown(j, "chain", {"dh"});
  ensure(j.contains("dh") && j["dh"].is_array(),
         "config: chain.dh must be an array of rows");
  KinematicChain chain;
  for (const json& row : j["dh"]) {
    reject_unknown(row, "chain.dh[]", {"a", "alpha", "d", "theta_offset"});
    DhRow r;
    r.a = num(row, "chain.dh[]", "a", 0.0);
    r.alpha = num(row, "chain.dh[]", "alpha", 0.0);
    r.d = num(row, "chain.dh[]", "d", 0.0);
    r.theta_offset = num(row, "chain.dh[]", "theta_offset", 0.0);
    chain.rows.push_back(r);
  }
  ensure(chain.dof() == 7, "config: chain must have exactly 7 DH rows, got " +
                               std::to_string(chain.dof()));
  return chain;
}

RunConfig parse_config(const json& j, const std::string& dir) {
  RunConfig rc;
  rc.config_dir = dir;
  reject_unknown(j, "", {"plant", "chain_file", "chain", "detector", "damping",
                         "manip", "controller", "attacker", "scenario", "output"});

  const json plant = j.value("plant", json::object());
  reject_unknown(plant, "plant", {"n", "Ts", "q_c", "sigma_q", "sigma_qd", "u_max"});
  rc.n = static_cast<int>(num(plant, "plant", "n", 7));
  rc.Ts = num(plant, "plant", "Ts", 0.01);
  rc.q_c = num(plant, "plant", "q_c", 1e-6);
  rc.sigma_q = num(plant, "plant", "sigma_q", 5e-5);
  rc.sigma_qd = num(plant, "plant", "sigma_qd", 1e-2);
  Vec u_default(7);
  u_default << 1, 1, 1, 1, 10, 10, 10;
  rc.u_max = vec_field(plant, "plant", "u_max", u_default);
  ensure(rc.u_max.size() == rc.n, "config: plant.u_max must have n entries");

  if (j.contains("chain")) {
    reject_unknown(j["chain"], "chain", {"dh"});
    json tmp = j["chain"];
    KinematicChain chain;
    for (const json& row : tmp["dh"]) {
      DhRow r;
      r.a = num(row, "chain.dh[]", "a", 0.0);
      r.alpha = num(row, "chain.dh[]", "alpha", 0.0);
      r.d = num(row, "chain.dh[]", "d", 0.0);
      r.theta_offset = num(row, "chain.dh[]", "theta_offset", 0.0);
      chain.rows.push_back(r);
    }
    ensure(chain.dof() == 7, "config: chain must have exactly 7 DH rows");
    rc.chain = chain;
  } else if (j.contains("chain_file")) {
    const std::string file = j["chain_file"].get<std::string>();
    const std::filesystem::path p =
        std::filesystem::path(file).is_absolute()
            ? std::filesystem::path(file)
            : std::filesystem::path(dir) / file;
    rc.chain = load_chain(p.string());
  } else {
    rc.chain = builtin_chain();
  }

  const json det = j.value("detector", json::object());
  reject_unknown(det, "detector", {"tau", "alpha_F"});
  ensure(!(det.contains("tau") && det.contains("alpha_F")),
         "config: give detector.tau or detector.alpha_F, not both");
  if (det.contains("alpha_F")) {
    const double alpha = num(det, "detector", "alpha_F", 0.0);
    ensure(alpha > 0.0 && alpha < 1.0, "config: detector.alpha_F out of range");
    rc.tau = chi2_inv_cdf(1.0 - alpha, 2 * rc.n);
  } else {
    rc.tau = num(det, "detector", "tau", 71.5735);
  }
  ensure(rc.tau > 0.0, "config: detector.tau must be positive");

  const json damp = j.value("damping", json::object());
  reject_unknown(damp, "damping", {"rho_max", "rho_y", "exp_m", "psi", "eps_vel"});
  rc.rho_max = num(damp, "damping", "rho_max", 1.2);
  rc.rho_y = num(damp, "damping", "rho_y", 0.01);
  rc.exp_m = num(damp, "damping", "exp_m", 2.0);
  rc.psi = num(damp, "damping", "psi", 0.99);
  rc.eps_vel = num(damp, "damping", "eps_vel", 1e-4);

  const json manip = j.value("manip", json::object());
  reject_unknown(manip, "manip",
                 {"alpha", "D_diag", "nu_max", "armijo_c", "armijo_beta",
                  "grad_zero_tol", "quota", "softplus_eps", "direction_eps",
                  "smooth_blend"});
  rc.manip.alpha = num(manip, "manip", "alpha", 10.0);
  rc.manip.D_diag = vec_field(manip, "manip", "D_diag", Vec::Ones(rc.n));
  ensure(rc.manip.D_diag.size() == rc.n, "config: manip.D_diag must have n entries");
  rc.manip.nu_max = num(manip, "manip", "nu_max", 5.0);
  rc.manip.armijo_c = num(manip, "manip", "armijo_c", 1e-4);
  rc.manip.armijo_beta = num(manip, "manip", "armijo_beta", 0.5);
  rc.manip.grad_zero_tol = num(manip, "manip", "grad_zero_tol", 1e-4);
  rc.manip.quota = num(manip, "manip", "quota", 0.3);
  rc.manip.softplus_eps = num(manip, "manip", "softplus_eps", 1e-6);
  rc.manip.direction_eps = num(manip, "manip", "direction_eps", 1e-2);
  rc.manip.smooth_blend = manip.value("smooth_blend", false);

  const json ctrl = j.value("controller", json::object());
  reject_unknown(ctrl, "controller", {"q_pos", "q_vel", "r", "c_w"});
  rc.lqr_q_pos = num(ctrl, "controller", "q_pos", 100.0);
  rc.lqr_q_vel = num(ctrl, "controller", "q_vel", 10.0);
  rc.lqr_r = num(ctrl, "controller", "r", 1.0);
  rc.c_w = num(ctrl, "controller", "c_w", 1.0);

  const json att = j.value("attacker", json::object());
  reject_unknown(att, "attacker", {"kp", "kd", "zeta", "fd_step_q", "fd_step_qd"});
  rc.attacker_kp = num(att, "attacker", "kp", 4.0);
  rc.attacker_kd = num(att, "attacker", "kd", 4.0);
  rc.attacker_zeta = num(att, "attacker", "zeta", 1e-2);
  rc.attacker_fd_q = num(att, "attacker", "fd_step_q", fd::kSensorPosStep);
  rc.attacker_fd_qd = num(att, "attacker", "fd_step_qd", fd::kSensorVelStep);

  const json scen = j.value("scenario", json::object());
  reject_unknown(scen, "scenario",
                 {"T", "q0", "circle_sweep", "mc_runs_a", "mc_runs_b",
                  "resync_interval"});
  rc.T = static_cast<int>(num(scen, "scenario", "T", 5000));
  ensure(rc.T >= 1, "config: scenario.T must be >= 1");
  Vec q0_default(7);
  q0_default << 0.0, 0.6, 0.0, 1.2, 0.0, 0.9, 0.0;
  rc.q0 = vec_field(scen, "scenario", "q0", q0_default);
  ensure(rc.q0.size() == rc.n, "config: scenario.q0 must have n entries");
  rc.circle_sweep = num(scen, "scenario", "circle_sweep", std::numbers::pi);
  rc.mc_runs_a = static_cast<int>(num(scen, "scenario", "mc_runs_a", 100));
  rc.mc_runs_b = static_cast<int>(num(scen, "scenario", "mc_runs_b", 1));
  rc.resync_interval = static_cast<int>(num(scen, "scenario", "resync_interval", 0));

  const json out = j.value("output", json::object());
  reject_unknown(out, "output", {"decimate"});
  rc.decimate = static_cast<int>(num(out, "output", "decimate", 1));
  ensure(rc.decimate >= 1, "config: output.decimate must be >= 1");

  rc.raw = config_to_json(rc);
  return rc;
}

json config_to_json(const RunConfig& rc) {
  json j;
  j["plant"] = {{"n", rc.n},       {"Ts", rc.Ts},
                {"q_c", rc.q_c},   {"sigma_q", rc.sigma_q},
                {"sigma_qd", rc.sigma_qd},
                {"u_max", std::vector<double>(rc.u_max.data(),
                                              rc.u_max.data() + rc.u_max.size())}};
  j["chain"] = chain_to_json(rc.chain);
  j["detector"] = {{"tau", rc.tau}};
  j["damping"] = {{"rho_max", rc.rho_max},
                  {"rho_y", rc.rho_y},
                  {"exp_m", rc.exp_m},
                  {"psi", rc.psi},
                  {"eps_vel", rc.eps_vel}};
  j["manip"] = {{"alpha", rc.manip.alpha},
                {"D_diag", std::vector<double>(rc.manip.D_diag.data(),
                                               rc.manip.D_diag.data() +
                                                   rc.manip.D_diag.size())},
                {"nu_max", rc.manip.nu_max},
                {"armijo_c", rc.manip.armijo_c},
                {"armijo_beta", rc.manip.armijo_beta},
                {"grad_zero_tol", rc.manip.grad_zero_tol},
                {"quota", rc.manip.quota},
                {"softplus_eps", rc.manip.softplus_eps},
                {"direction_eps", rc.manip.direction_eps},
                {"smooth_blend", rc.manip.smooth_blend}};
  j["controller"] = {{"q_pos", rc.lqr_q_pos},
                     {"q_vel", rc.lqr_q_vel},
                     {"r", rc.lqr_r},
                     {"c_w", rc.c_w}};
  j["attacker"] = {{"kp", rc.attacker_kp},
                   {"kd", rc.attacker_kd},
                   {"zeta", rc.attacker_zeta},
                   {"fd_step_q", rc.attacker_fd_q},
                   {"fd_step_qd", rc.attacker_fd_qd}};
  j["scenario"] = {{"T", rc.T},
                   {"q0", std::vector<double>(rc.q0.data(),
                                              rc.q0.data() + rc.q0.size())},
                   {"circle_sweep", rc.circle_sweep},
                   {"mc_runs_a", rc.mc_runs_a},
                   {"mc_runs_b", rc.mc_runs_b},
                   {"resync_interval", rc.resync_interval}};
  j["output"] = {{"decimate", rc.decimate}};
  return j;
}

RunConfig default_config() { return parse_config(json::object(), "."); }

namespace {

json parse_override_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return json(text);  // plain string
  }
}

json apply_override_list(json j, const std::vector<std::string>& overrides) {
  for (const std::string& ov : overrides) {
    const size_t eq = ov.find('=');
    ensure(eq != std::string::npos, "override must look like key.path=value: " + ov);
    const std::string path = ov.substr(0, eq);
    const json value = parse_override_value(ov.substr(eq + 1));
    json* node = &j;
    size_t pos = 0;
    while (true) {
      const size_t dot = path.find('.', pos);
      const std::string key = path.substr(pos, dot - pos);
      ensure(!key.empty(), "override has an empty key segment: " + ov);
      if (dot == std::string::npos) {
        (*node)[key] = value;
        break;
      }
      node = &(*node)[key];
      pos = dot + 1;
    }
  }
  return j;
}

}  // namespace

RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  ensure(in.good(), "config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("config: " + path + ": " + e.what());
  }
  const std::string dir = std::filesystem::path(path).parent_path().string();
  return parse_config(apply_override_list(j, overrides), dir.empty() ? "." : dir);
}

RunConfig apply_overrides(const RunConfig& rc,
                          const std::vector<std::string>& overrides) {
  return parse_config(apply_override_list(rc.raw, overrides), rc.config_dir);
}

std::shared_ptr<const WorldConfig> build_world_config(const RunConfig& rc,
                                                      const ScenarioConfig& sc) {
  auto wc = std::make_shared<WorldConfig>();
  wc->plant = make_plant_model(rc.n, rc.Ts, rc.q_c, rc.sigma_q, rc.sigma_qd, rc.u_max);
  wc->gains = estimator_gains(wc->plant);
  wc->detector = detector_from_tau(rc.tau, wc->plant.meas_dim());
  wc->damping = make_damping_config(rc.rho_max, rc.rho_y, rc.exp_m, /*z_x=*/0.0,
                                    rc.psi, rc.eps_vel, wc->plant.meas_dim());
  wc->manip = rc.manip;
  wc->ctrl = make_controller_gains(rc.Ts, rc.lqr_q_pos, rc.lqr_q_vel, rc.lqr_r,
                                   rc.c_w);
  wc->chain = rc.chain;

  const HandPose start = forward_kinematics(rc.chain, rc.q0);
  TaskPlan still;
  still.kind = TaskKind::Still;
  still.p_start = start.p;
  still.R_start = start.Rmat;
  TaskPlan circle;
  circle.kind = TaskKind::Circle;
  circle.p_start = start.p;
  circle.R_start = start.Rmat;
  circle.sweep_angle = rc.circle_sweep;
  circle.duration_steps = sc.T;
  circle.Ts = rc.Ts;

  wc->nominal_task = sc.nominal_task == TaskKind::Still ? still : circle;
  wc->attacker_task = circle;
  wc->attacker.Kp_A = rc.attacker_kp * Mat3::Identity();
  wc->attacker.Kd_A = rc.attacker_kd * Mat3::Identity();
  wc->attacker.zeta = rc.attacker_zeta;
  wc->attacker.tau = wc->detector.tau;
  wc->attacker.fd_step_q = rc.attacker_fd_q;
  wc->attacker.fd_step_qd = rc.attacker_fd_qd;
  wc->flags = sc.flags;
  wc->T = sc.T;
  wc->resync_interval = rc.resync_interval;
  wc->cov_table = covariance_recursion(wc->gains, wc->plant, sc.T + 4);
  return wc;
}

}  // namespace fdia
