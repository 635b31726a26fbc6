// Command-line driver: runs one configuration or a one-key sweep and writes
// JSON summaries plus CDF tables under --out.

#include "ulpc/config.hpp"
#include "ulpc/engine.hpp"
#include "ulpc/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

void write_cdf(const fs::path& path, const ulpc::RunSummary& s) {
  std::ofstream out(path);
  ulpc::write_cdf_csv(out, s);
}

void export_plmaps(const ulpc::SimConfig& config, const fs::path& dir) {
  for (int d = 0; d < config.n_drops; ++d) {
    const ulpc::Scenario scenario = ulpc::make_scenario(config, config.seed + d);
    std::ofstream out(dir / ("plmap_drop" + std::to_string(d) + ".csv"));
    ulpc::write_path_loss_csv(out, scenario.plmap);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uplink multicell power-control simulator"};

  std::string config_path;
  std::string scheme;
  double zeta = 0.0;
  std::uint64_t seed = 0;
  int slots = 0;
  int drops = 0;
  std::string out_dir = "out";
  std::string sweep;
  std::vector<std::string> overrides;
  bool export_plmap = false;

  app.add_option("--config", config_path, "Flat key = value configuration file")->check(CLI::ExistingFile);
  auto* scheme_opt = app.add_option("--scheme", scheme, "maxpower | fpc | rlpc | cnb");
  auto* zeta_opt = app.add_option("--zeta", zeta, "C&B interference weight");
  auto* seed_opt = app.add_option("--seeds", seed, "Base seed; drop d uses seed + d");
  auto* slots_opt = app.add_option("--slots", slots, "Slots per drop");
  auto* drops_opt = app.add_option("--drops", drops, "Number of drops");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--sweep", sweep, "KEY=V1,V2,... one run per value, paired seeds");
  app.add_option("--set", overrides, "KEY=VALUE override, repeatable");
  app.add_flag("--export-plmap", export_plmap, "Write each drop's path-loss map as CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    ulpc::SimConfig config;
    if (!config_path.empty()) config = ulpc::load_config_file(config_path, config);
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ulpc::ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
      ulpc::apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (*scheme_opt) ulpc::apply_setting(config, "scheme", scheme);
    if (*zeta_opt) config.cnb.zeta = zeta;
    if (*seed_opt) config.seed = seed;
    if (*slots_opt) config.n_slots = slots;
    if (*drops_opt) config.n_drops = drops;
    config.validate();

    std::string axis;
    std::vector<std::string> values;
    if (!sweep.empty()) {
      const auto eq = sweep.find('=');
      if (eq == std::string::npos) throw ulpc::ConfigError("--sweep expects KEY=V1,V2,...");
      axis = sweep.substr(0, eq);
      values = split(sweep.substr(eq + 1), ',');
      if (!ulpc::is_known_key(axis)) throw ulpc::ConfigError("unknown sweep key '" + axis + "'");
      // Reject bad values before spending time on any run.
      for (const std::string& v : values) {
        ulpc::SimConfig probe = config;
        ulpc::apply_setting(probe, axis, v);
        probe.validate();
      }
    }

    const fs::path out(out_dir);
    fs::create_directories(out);
    if (export_plmap) export_plmaps(config, out);

    if (axis.empty()) {
      const ulpc::RunSummary s = ulpc::run(config);
      write_json(out / "summary.json", ulpc::to_json(s));
      write_cdf(out / "cdf.csv", s);
      std::cout << s.scheme << ": avg " << s.cell_avg_throughput_mbps << " Mbit/s, edge "
                << s.edge_throughput_mbps << " Mbit/s, " << s.power_efficiency_mbits_per_j
                << " Mbit/J\n";
    } else {
      const ulpc::SweepResult r = ulpc::run_sweep(config, axis, values);
      write_json(out / "sweep.json", ulpc::to_json(r));
      for (std::size_t i = 0; i < r.runs.size(); ++i) {
        const ulpc::RunSummary& s = r.runs[i];
        write_cdf(out / ("cdf_" + axis + "_" + r.values[i] + ".csv"), s);
        std::cout << axis << '=' << r.values[i] << ": avg " << s.cell_avg_throughput_mbps
                  << " Mbit/s, edge " << s.edge_throughput_mbps << " Mbit/s, "
                  << s.power_efficiency_mbits_per_j << " Mbit/J\n";
      }
    }
  } catch (const ulpc::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
