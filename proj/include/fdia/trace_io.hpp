#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "fdia/scenario.hpp"

namespace fdia {

// Stable trace CSV schema (one header row, one row per kept step). The named
// signal columns are: samples, gainActiveDissipation_q, kinNrgTot, costVal,
// ADS_z, handVelocity_l2, followed by the projected score, alarm flag, hand /
// reference positions and the per-joint q, qd, u, u_d and attack bias groups.
std::string trace_header(int n);
std::string trace_row_csv(const TraceRow& row, int n);

/// Writes the (decimated) trace; row k is kept when k % decimate == 0.
void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows,
                     int n, int decimate);

nlohmann::json metrics_to_json(const MetricsReport& m);
MetricsReport metrics_from_json(const nlohmann::json& j);

void write_metrics_json(const std::string& path, const MetricsReport& m,
                        const std::string& scenario_id, std::uint64_t seed);

// Table 2-style comparison across scenario outputs found in run_dir
// (<id>_metrics.json). Missing scenarios produce empty columns; absent metric
// cells are printed as a null sign.
std::string report_table(const std::string& run_dir,
                         std::vector<std::string>* missing = nullptr);

}  // namespace fdia
