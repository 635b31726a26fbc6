#include "ulpc/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>

namespace ulpc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for '" + key + "': '" + v + "'");
  }
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& v) {
  Int x{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("invalid integer for '" + key + "': '" + v + "'");
  }
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw ConfigError("invalid flag for '" + key + "': '" + v + "'");
}

// Shortest text that parses back to the same double.
std::string fmt(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

struct Field {
  std::function<void(SimConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const SimConfig&)> get;
};

Field real(double SimConfig::*member) {
  return {[member](SimConfig& c, const std::string& k, const std::string& v) { c.*member = parse_double(k, v); },
          [member](const SimConfig& c) { return fmt(c.*member); }};
}

template <typename Sub>
Field real(Sub SimConfig::*sub, double Sub::*member) {
  return {[=](SimConfig& c, const std::string& k, const std::string& v) { (c.*sub).*member = parse_double(k, v); },
          [=](const SimConfig& c) { return fmt((c.*sub).*member); }};
}

template <typename Int>
Field integer(Int SimConfig::*member) {
  return {[member](SimConfig& c, const std::string& k, const std::string& v) { c.*member = parse_int<Int>(k, v); },
          [member](const SimConfig& c) { return std::to_string(c.*member); }};
}

template <typename Sub>
Field integer(Sub SimConfig::*sub, int Sub::*member) {
  return {[=](SimConfig& c, const std::string& k, const std::string& v) { (c.*sub).*member = parse_int<int>(k, v); },
          [=](const SimConfig& c) { return std::to_string((c.*sub).*member); }};
}

Field flag(bool SimConfig::*member) {
  return {[member](SimConfig& c, const std::string& k, const std::string& v) { c.*member = parse_bool(k, v); },
          [member](const SimConfig& c) { return std::string(c.*member ? "true" : "false"); }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"scheme",
       {[](SimConfig& c, const std::string&, const std::string& v) {
          try {
            c.scheme = scheme_from_string(v);
          } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
          }
        },
        [](const SimConfig& c) { return to_string(c.scheme); }}},
      {"zeta", real(&SimConfig::cnb, &CnbParams::zeta)},
      {"iot_s", real(&SimConfig::cnb, &CnbParams::iot_s_db)},
      {"snr_i", real(&SimConfig::cnb, &CnbParams::snr_i_db)},
      {"iot_i", real(&SimConfig::cnb, &CnbParams::iot_i_db)},
      {"bisect_lo", real(&SimConfig::cnb, &CnbParams::bisect_lo_dbm)},
      {"tol", real(&SimConfig::cnb, &CnbParams::tol_db)},
      {"recalibrate_iot_s", flag(&SimConfig::recalibrate_iot_s)},
      {"p_max", real(&SimConfig::p_max_dbm)},
      {"p0_fpc", real(&SimConfig::fpc, &FpcParams::p0_dbm)},
      {"kappa", real(&SimConfig::fpc, &FpcParams::kappa)},
      {"p0_rlpc", real(&SimConfig::rlpc, &RlpcParams::p0_dbm)},
      {"phi", real(&SimConfig::rlpc, &RlpcParams::phi)},
      {"rings", integer(&SimConfig::rings)},
      {"isd", real(&SimConfig::isd_m)},
      {"ues_per_cell", integer(&SimConfig::ues_per_cell)},
      {"min_dist", real(&SimConfig::pathloss, &PathLossModel::min_distance_m)},
      {"shadow_std", real(&SimConfig::pathloss, &PathLossModel::shadow_std_db)},
      {"penetration", real(&SimConfig::pathloss, &PathLossModel::penetration_db)},
      {"antenna_gain", real(&SimConfig::pathloss, &PathLossModel::max_gain_dbi)},
      {"noise_figure", real(&SimConfig::noise, &NoiseModel::noise_figure_db)},
      {"t_max", real(&SimConfig::amc, &AmcCurve::t_max)},
      {"amc_a", real(&SimConfig::amc, &AmcCurve::a)},
      {"amc_b", real(&SimConfig::amc, &AmcCurve::b)},
      {"sinr_floor", real(&SimConfig::amc, &AmcCurve::sinr_floor_db)},
      {"sinr_ceiling", real(&SimConfig::amc, &AmcCurve::sinr_ceiling_db)},
      {"staircase", flag(&SimConfig::staircase)},
      {"combining_gain", real(&SimConfig::combining_gain_db)},
      {"fading", flag(&SimConfig::fading)},
      {"fading_block", integer(&SimConfig::fading_block_rbs)},
      {"total_rbs", integer(&SimConfig::grid, &RbGrid::total_rbs)},
      {"control_rbs", integer(&SimConfig::grid, &RbGrid::control_rbs)},
      {"alpha", real(&SimConfig::pf, &PfParams::alpha)},
      {"beta", real(&SimConfig::pf, &PfParams::beta)},
      {"ewma", real(&SimConfig::pf, &PfParams::ewma)},
      {"scheduler",
       {[](SimConfig&, const std::string& k, const std::string& v) {
          if (v != "pf") throw ConfigError("unsupported value for '" + k + "': '" + v + "'");
        },
        [](const SimConfig&) { return std::string("pf"); }}},
      {"delay", integer(&SimConfig::delay_slots)},
      {"slots", integer(&SimConfig::n_slots)},
      {"slot_duration", real(&SimConfig::slot_duration_s)},
      {"drops", integer(&SimConfig::n_drops)},
      {"seed", integer(&SimConfig::seed)},
  };
  return table;
}

const Field* find_field(const std::string& key) {
  for (const auto& [name, field] : fields())
    if (name == key) return &field;
  return nullptr;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& entry : fields()) out.push_back(entry.first);
    return out;
  }();
  return keys;
}

bool is_known_key(const std::string& key) { return find_field(key) != nullptr; }

void apply_setting(SimConfig& config, const std::string& key, const std::string& value) {
  const Field* field = find_field(key);
  if (!field) throw ConfigError("unknown configuration key '" + key + "'");
  field->set(config, key, trim(value));
}

std::vector<std::pair<std::string, std::string>> settings_of(const SimConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [name, field] : fields()) out.emplace_back(name, field.get(config));
  return out;
}

SimConfig load_config(std::istream& in, SimConfig base) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

SimConfig load_config_file(const std::string& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  return load_config(in, std::move(base));
}

}  // namespace ulpc
