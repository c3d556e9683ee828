#include "fdia/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "fdia/chi2.hpp"
#include "fdia/trace_io.hpp"

namespace fdia {

namespace {

RunConfig config_for(const RunOptions& opt) {
  if (opt.config_path.empty())
    return apply_overrides(default_config(), opt.overrides);
  return load_config(opt.config_path, opt.overrides);
}

}  // namespace

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig rc = config_for(opt);
    ScenarioConfig sc = scenario_by_id(opt.scenario_id);
    sc.T = rc.T;
    sc.seed = opt.seed;
    const auto wc = build_world_config(rc, sc);

    const RunResult result = run_scenario(wc, rc.q0, sc.T, sc.seed, true);

    std::filesystem::create_directories(opt.out_dir);
    const std::filesystem::path dir(opt.out_dir);
    const int decimate = opt.decimate > 0 ? opt.decimate : rc.decimate;
    write_trace_csv((dir / (sc.id + "_trace.csv")).string(), result.trace,
                    rc.n, decimate);
    write_metrics_json((dir / (sc.id + "_metrics.json")).string(),
                       result.metrics, sc.id, sc.seed);
    out << sc.id << ": rms_nominal=" << result.metrics.rms_nominal;
    if (result.metrics.rms_attacker)
      out << " rms_attacker=" << *result.metrics.rms_attacker;
    out << " alarms=" << result.metrics.alarm_count << " max_z="
        << result.metrics.max_z << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << '\n';
    return 1;
  }
}

int cmd_mc(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig rc = config_for(opt);
    ScenarioConfig sc = scenario_by_id(opt.scenario_id);
    sc.T = rc.T;
    sc.seed = opt.seed;
    sc.mc_runs = sc.has_attacker ? rc.mc_runs_b : rc.mc_runs_a;
    if (opt.runs > 0) sc.mc_runs = opt.runs;
    const auto wc = build_world_config(rc, sc);

    const MonteCarloResult result =
        monte_carlo(wc, rc.q0, sc.T, sc.seed, sc.mc_runs);

    std::filesystem::create_directories(opt.out_dir);
    const std::filesystem::path dir(opt.out_dir);
    write_metrics_json((dir / (sc.id + "_metrics.json")).string(),
                       result.aggregate, sc.id, sc.seed);
    nlohmann::json per_run = nlohmann::json::array();
    for (const MetricsReport& m : result.per_run)
      per_run.push_back(metrics_to_json(m));
    nlohmann::json mc;
    mc["scenario"] = sc.id;
    mc["seed"] = sc.seed;
    mc["runs"] = sc.mc_runs;
    mc["aggregate"] = metrics_to_json(result.aggregate);
    mc["per_run"] = per_run;
    mc["failures"] = result.failures;
    std::ofstream mcf(dir / (sc.id + "_mc_metrics.json"));
    mcf << mc.dump(2) << '\n';

    out << sc.id << ": " << result.aggregate.runs_aggregated << "/" << sc.mc_runs
        << " runs, mean rms_nominal=" << result.aggregate.rms_nominal << '\n';
    for (const std::string& f : result.failures) err << "  failed " << f << '\n';
    return result.failures.empty() ? 0 : 1;
  } catch (const std::exception& e) {
    err << "mc failed: " << e.what() << '\n';
    return 1;
  }
}

int cmd_calibrate(const CalibrateOptions& opt, std::ostream& out,
                  std::ostream& err) {
  try {
    double tau = 0.0;
    if (opt.tau > 0.0) {
      tau = opt.tau;
    } else if (opt.alpha_F > 0.0) {
      ensure(opt.alpha_F < 1.0, "calibrate: alpha_F must lie in (0,1)");
      tau = chi2_inv_cdf(1.0 - opt.alpha_F, opt.dof);
    } else if (opt.arl > 0.0) {
      ensure(opt.arl > 1.0, "calibrate: ARL must exceed 1 sample");
      tau = chi2_inv_cdf(1.0 - 1.0 / opt.arl, opt.dof);
    } else {
      throw std::runtime_error("calibrate: give one of --tau, --alpha, --arl");
    }
    const double alpha = chi2_sf(tau, opt.dof);
    const double arl = 1.0 / alpha;
    out << std::setprecision(10);
    out << "dof      " << opt.dof << '\n';
    out << "tau      " << tau << '\n';
    out << "alpha_F  " << alpha << '\n';
    out << "ARL      " << arl << " samples\n";
    out << "ARL      " << arl * opt.Ts / 3600.0 << " hours (Ts=" << opt.Ts
        << " s)\n";
    return 0;
  } catch (const std::exception& e) {
    err << "calibrate failed: " << e.what() << '\n';
    return 1;
  }
}

int cmd_report(const std::string& run_dir, std::ostream& out, std::ostream& err) {
  try {
    std::vector<std::string> problems;
    const std::string table = report_table(run_dir, &problems);
    out << table;
    for (const std::string& p : problems) err << p << '\n';
    // Missing scenarios are tolerated (partial tables are useful); malformed
    // files are an error.
    for (const std::string& p : problems)
      if (p.rfind("malformed:", 0) == 0) return 1;
    return 0;
  } catch (const std::exception& e) {
    err << "report failed: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace fdia
