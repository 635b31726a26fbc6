#pragma once

#include "ulpc/engine.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ulpc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Every key accepted in a run configuration, in echo order.
const std::vector<std::string>& config_keys();
bool is_known_key(const std::string& key);

/// Sets one key from its text value. Throws ConfigError on an unknown key or
/// an unparsable value.
void apply_setting(SimConfig& config, const std::string& key, const std::string& value);

/// Current value of every key, formatted so apply_setting reads it back.
std::vector<std::pair<std::string, std::string>> settings_of(const SimConfig& config);

/// Flat "key = value" lines; '#' starts a comment. Applied on top of base.
SimConfig load_config(std::istream& in, SimConfig base = {});
SimConfig load_config_file(const std::string& path, SimConfig base = {});

}  // namespace ulpc
