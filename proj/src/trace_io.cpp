#include "fdia/trace_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace fdia {

using nlohmann::json;

std::string trace_header(int n) {
  std::ostringstream os;
  os << "samples,gainActiveDissipation_q,kinNrgTot,costVal,ADS_z,"
        "handVelocity_l2,proj_z,manip_w,alarm,power_final_l1,"
        "hand_px,hand_py,hand_pz,ref_px,ref_py,ref_pz,att_px,att_py,att_pz";
  for (int j = 1; j <= n; ++j) os << ",q" << j;
  for (int j = 1; j <= n; ++j) os << ",qd" << j;
  for (int j = 1; j <= n; ++j) os << ",u" << j;
  for (int j = 1; j <= n; ++j) os << ",ud" << j;
  for (int j = 1; j <= n; ++j) os << ",a_q" << j;
  return os.str();
}

std::string trace_row_csv(const TraceRow& row, int n) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << row.k << ',' << row.phi_val << ',' << row.kin_energy << ','
     << row.cost_val << ',' << row.z << ',' << row.hand_vel << ','
     << row.z_tilde << ',' << row.w_manip << ',' << (row.alarmed ? 1 : 0) << ','
     << row.abs_power;
  for (int i = 0; i < 3; ++i) os << ',' << row.p[i];
  for (int i = 0; i < 3; ++i) os << ',' << row.p_ref[i];
  for (int i = 0; i < 3; ++i) os << ',' << row.p_att_ref[i];
  for (int j = 0; j < n; ++j) os << ',' << row.q[j];
  for (int j = 0; j < n; ++j) os << ',' << row.qd[j];
  for (int j = 0; j < n; ++j) os << ',' << row.u[j];
  for (int j = 0; j < n; ++j) os << ',' << row.u_d[j];
  for (int j = 0; j < n; ++j) os << ',' << row.a_pos[j];
  return os.str();
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows,
                     int n, int decimate) {
  ensure(decimate >= 1, "write_trace_csv: decimate must be >= 1");
  std::ofstream out(path);
  ensure(out.good(), "cannot open trace file for writing: " + path);
  out << trace_header(n) << '\n';
  for (const TraceRow& row : rows)
    if (row.k % decimate == 0) out << trace_row_csv(row, n) << '\n';
}

json metrics_to_json(const MetricsReport& m) {
  json j;
  j["rms_nominal"] = m.rms_nominal;
  j["mnd_nominal"] = m.mnd_nominal;
  if (m.rms_attacker) j["rms_attacker"] = *m.rms_attacker;
  if (m.mnd_attacker) j["mnd_attacker"] = *m.mnd_attacker;
  j["mean_qdot_norm"] = m.mean_qdot_norm;
  j["max_qdot_norm"] = m.max_qdot_norm;
  j["mean_abs_power"] = m.mean_abs_power;
  j["max_abs_power"] = m.max_abs_power;
  j["path_length"] = m.path_length;
  j["e_inj"] = m.e_inj;
  j["e_diss"] = m.e_diss;
  j["alarm_count"] = m.alarm_count;
  j["max_z"] = m.max_z;
  j["max_z_tilde"] = m.max_z_tilde;
  j["claim1_max_projected_power"] = m.claim1_max_projected_power;
  j["claim2_hold_fraction"] = m.claim2_hold_fraction;
  j["jstar_identity_max"] = m.jstar_identity_max;
  j["usec_nullspace_max"] = m.usec_nullspace_max;
  j["max_z_model"] = m.max_z_model;
  j["mean_w_manip"] = m.mean_w_manip;
  j["sensitivity_richardson"] = m.sensitivity_richardson;
  j["runs_aggregated"] = m.runs_aggregated;
  j["failed_runs"] = m.failed_runs;
  return j;
}

MetricsReport metrics_from_json(const json& j) {
  MetricsReport m;
  m.rms_nominal = j.at("rms_nominal").get<double>();
  m.mnd_nominal = j.at("mnd_nominal").get<double>();
  if (j.contains("rms_attacker")) m.rms_attacker = j["rms_attacker"].get<double>();
  if (j.contains("mnd_attacker")) m.mnd_attacker = j["mnd_attacker"].get<double>();
  m.mean_qdot_norm = j.at("mean_qdot_norm").get<double>();
  m.max_qdot_norm = j.at("max_qdot_norm").get<double>();
  m.mean_abs_power = j.at("mean_abs_power").get<double>();
  m.max_abs_power = j.at("max_abs_power").get<double>();
  m.path_length = j.at("path_length").get<double>();
  m.e_inj = j.at("e_inj").get<double>();
  m.e_diss = j.at("e_diss").get<double>();
  m.alarm_count = j.at("alarm_count").get<int>();
  m.max_z = j.at("max_z").get<double>();
  m.max_z_tilde = j.at("max_z_tilde").get<double>();
  m.claim1_max_projected_power = j.value("claim1_max_projected_power", 0.0);
  m.claim2_hold_fraction = j.value("claim2_hold_fraction", 1.0);
  m.jstar_identity_max = j.value("jstar_identity_max", 0.0);
  m.usec_nullspace_max = j.value("usec_nullspace_max", 0.0);
  m.max_z_model = j.value("max_z_model", 0.0);
  m.mean_w_manip = j.value("mean_w_manip", 0.0);
  m.sensitivity_richardson = j.value("sensitivity_richardson", 0.0);
  m.runs_aggregated = j.value("runs_aggregated", 1);
  m.failed_runs = j.value("failed_runs", 0);
  return m;
}

void write_metrics_json(const std::string& path, const MetricsReport& m,
                        const std::string& scenario_id, std::uint64_t seed) {
  json j = metrics_to_json(m);
  j["scenario"] = scenario_id;
  j["seed"] = seed;
  std::ofstream out(path);
  ensure(out.good(), "cannot open metrics file for writing: " + path);
  out << j.dump(2) << '\n';
}

namespace {

std::string fmt_cell(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << std::scientific << v;
  return os.str();
}

}  // namespace

std::string report_table(const std::string& run_dir,
                         std::vector<std::string>* missing) {
  const std::vector<std::string> ids = scenario_ids();
  std::vector<std::optional<MetricsReport>> reports(ids.size());
  std::vector<std::string> problems;
  for (size_t i = 0; i < ids.size(); ++i) {
    const std::filesystem::path p =
        std::filesystem::path(run_dir) / (ids[i] + "_metrics.json");
    if (!std::filesystem::exists(p)) {
      problems.push_back("missing: " + p.string());
      continue;
    }
    try {
      std::ifstream in(p);
      json j;
      in >> j;
      reports[i] = metrics_from_json(j);
    } catch (const std::exception& e) {
      problems.push_back("malformed: " + p.string() + " (" + e.what() + ")");
    }
  }
  if (missing) *missing = problems;

  struct RowDef {
    std::string id;
    std::string label;
    std::function<std::optional<double>(const MetricsReport&, const std::string&)>
        get;
  };
  const std::string none = "-";
  // The defense-energy rows only exist where virtual damping runs.
  auto vd_scenario = [](const std::string& id) {
    return id == "A2" || id == "A3" || id == "B3" || id == "B4";
  };
  const std::vector<RowDef> defs = {
      {"M1.1", "RMS nominal [m]",
       [](const MetricsReport& m, const std::string&) {
         return std::optional<double>(m.rms_nominal);
       }},
      {"M1.2", "MND nominal [m]",
       [](const MetricsReport& m, const std::string&) {
         return std::optional<double>(m.mnd_nominal);
       }},
      {"M2.1", "RMS attacker [m]",
       [](const MetricsReport& m, const std::string&) { return m.rms_attacker; }},
      {"M2.2", "MND attacker [m]",
       [](const MetricsReport& m, const std::string&) { return m.mnd_attacker; }},
      {"M3.1", "mean |qd| [rad/s]",
       [](const MetricsReport& m, const std::string&) {
         return std::optional<double>(m.mean_qdot_norm);
       }},
      {"M3.2", "max |qd| [rad/s]",
       [](const MetricsReport& m, const std::string&) {
         return std::optional<double>(m.max_qdot_norm);
       }},
      {"M3.3", "mean |P_tot| [W]",
       [](const MetricsReport& m, const std::string&) {
         return std::optional<double>(m.mean_abs_power);
       }},
      {"M3.4", "max |P_tot| [W]",
       [](const MetricsReport& m, const std::string&) {
         return std::optional<double>(m.max_abs_power);
       }},
      {"M3.5", "path length [m]",
       [](const MetricsReport& m, const std::string&) {
         return std::optional<double>(m.path_length);
       }},
      {"M3.6", "E_inj [J]",
       [vd_scenario](const MetricsReport& m, const std::string& id) {
         return vd_scenario(id) ? std::optional<double>(m.e_inj) : std::nullopt;
       }},
      {"M3.7", "E_diss [J]",
       [vd_scenario](const MetricsReport& m, const std::string& id) {
         return vd_scenario(id) ? std::optional<double>(m.e_diss) : std::nullopt;
       }},
  };

  std::ostringstream os;
  os << std::left << std::setw(6) << "ID" << std::setw(22) << "Metric";
  for (size_t i = 0; i < ids.size(); ++i)
    if (reports[i]) os << std::setw(13) << ids[i];
  os << '\n';
  for (const RowDef& def : defs) {
    os << std::left << std::setw(6) << def.id << std::setw(22) << def.label;
    for (size_t i = 0; i < ids.size(); ++i) {
      if (!reports[i]) continue;
      const auto v = def.get(*reports[i], ids[i]);
      os << std::setw(13) << (v ? fmt_cell(*v) : none);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace fdia
