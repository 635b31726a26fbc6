#pragma once

#include "ulpc/engine.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ulpc {

struct RunSummary {
  std::string scheme;
  double zeta = 0.0;
  double cell_avg_throughput_mbps = 0.0;
  double edge_throughput_mbps = 0.0;  // 5th percentile over pooled UEs
  double power_efficiency_mbits_per_j = 0.0;
  int n_drops = 0;
  std::vector<std::uint64_t> seeds;

  std::vector<double> ue_throughput_mbps;
  std::vector<double> ue_snr_db;  // UEs never scheduled are left out
  std::vector<double> ue_iot_db;
  std::vector<std::pair<std::string, std::string>> config;
};

RunSummary summarize(std::span<const MetricsAccumulator> accs, const SimConfig& config);

/// Runs every drop of config and summarises them.
RunSummary run(const SimConfig& config);

nlohmann::json to_json(const RunSummary& summary);

/// Empirical CDF rows (metric, value, cum_fraction) for throughput, SNR and IoT.
void write_cdf_csv(std::ostream& out, const RunSummary& summary);

struct SweepResult {
  std::string axis;
  std::vector<std::string> values;
  std::vector<RunSummary> runs;
};

/// One full run per value of a configuration key; every run shares the
/// base seed so the drops are paired across values.
SweepResult run_sweep(const SimConfig& config, const std::string& axis,
                      const std::vector<std::string>& values);

nlohmann::json to_json(const SweepResult& sweep);

}  // namespace ulpc
