#include "ulpc/report.hpp"

#include "ulpc/config.hpp"
#include "ulpc/stats.hpp"

#include <algorithm>
#include <ostream>

namespace ulpc {

RunSummary summarize(std::span<const MetricsAccumulator> accs, const SimConfig& config) {
  MetricsAccumulator pooled;
  for (const MetricsAccumulator& a : accs) pooled.merge(a);

  RunSummary s;
  s.scheme = to_string(config.scheme);
  s.zeta = config.cnb.zeta;
  s.n_drops = pooled.n_drops;
  s.seeds = pooled.seeds;
  s.config = settings_of(config);

  const double seconds = static_cast<double>(pooled.n_slots) * pooled.slot_duration_s;
  s.ue_throughput_mbps.reserve(pooled.num_ues());
  for (int u = 0; u < pooled.num_ues(); ++u) {
    s.ue_throughput_mbps.push_back(seconds > 0.0 ? pooled.bits[u] / seconds / 1e6 : 0.0);
    if (pooled.samples[u] > 0.0) {
      s.ue_snr_db.push_back(linear_to_db(pooled.snr_sum[u] / pooled.samples[u]));
      s.ue_iot_db.push_back(linear_to_db(pooled.iot_sum[u] / pooled.samples[u]));
    }
  }

  if (pooled.n_cells > 0) {
    double total = 0.0;
    for (double x : s.ue_throughput_mbps) total += x;
    s.cell_avg_throughput_mbps = total / pooled.n_cells;
  }
  if (!s.ue_throughput_mbps.empty()) s.edge_throughput_mbps = percentile(s.ue_throughput_mbps, 0.05);

  const double energy = pooled.energy_j.sum();
  s.power_efficiency_mbits_per_j = energy > 0.0 ? pooled.bits.sum() / 1e6 / energy : 0.0;
  return s;
}

RunSummary run(const SimConfig& config) {
  const std::vector<MetricsAccumulator> accs = run_drops(config);
  return summarize(accs, config);
}

nlohmann::json to_json(const RunSummary& summary) {
  nlohmann::json config = nlohmann::json::object();
  for (const auto& [k, v] : summary.config) config[k] = v;
  return {
      {"scheme", summary.scheme},
      {"zeta", summary.zeta},
      {"avg_mbps", summary.cell_avg_throughput_mbps},
      {"edge_mbps", summary.edge_throughput_mbps},
      {"mbits_per_joule", summary.power_efficiency_mbits_per_j},
      {"n_drops", summary.n_drops},
      {"seeds", summary.seeds},
      {"config", config},
  };
}

namespace {

void write_cdf(std::ostream& out, const std::string& metric, std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << metric << ',' << values[i] << ',' << static_cast<double>(i + 1) / n << '\n';
  }
}

}  // namespace

void write_cdf_csv(std::ostream& out, const RunSummary& summary) {
  out << "metric,value,cum_fraction\n";
  out.precision(10);
  write_cdf(out, "throughput_mbps", summary.ue_throughput_mbps);
  write_cdf(out, "snr_db", summary.ue_snr_db);
  write_cdf(out, "iot_db", summary.ue_iot_db);
}

SweepResult run_sweep(const SimConfig& config, const std::string& axis,
                      const std::vector<std::string>& values) {
  if (!is_known_key(axis)) throw ConfigError("unknown sweep key '" + axis + "'");
  SweepResult out;
  out.axis = axis;
  for (const std::string& v : values) {
    SimConfig point = config;
    apply_setting(point, axis, v);
    out.values.push_back(v);
    out.runs.push_back(run(point));
  }
  return out;
}

nlohmann::json to_json(const SweepResult& sweep) {
  nlohmann::json points = nlohmann::json::array();
  for (std::size_t i = 0; i < sweep.runs.size(); ++i) {
    points.push_back({{"value", sweep.values[i]}, {"summary", to_json(sweep.runs[i])}});
  }
  return {{"axis", sweep.axis}, {"points", points}};
}

}  // namespace ulpc
