#pragma once

// Flat `key = value` experiment configuration.
//
// One entry per line, `#` starts a comment, dotted keys group related
// settings, 4-vectors are comma separated in surge,sway,heave,yaw order.
// Resolution order: scenario preset < file entries < --set overrides <
// --seed < --no-ann. Component seeds that are not given explicitly are
// derived from the master `seed`.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rovctl/simulation.hpp"

namespace rovctl {

struct ConfigOverrides {
  std::vector<std::pair<std::string, std::string>> set;  // --set KEY=VALUE, in order
  std::optional<std::uint64_t> seed;
  bool no_ann = false;
};

/// Splits "KEY=VALUE". Throws ConfigError when there is no '='.
std::pair<std::string, std::string> parse_assignment(std::string_view text);

/// Throws ConfigError naming the key on unknown keys, malformed values, or a
/// resolved config that fails validation.
SimConfig resolve_config(std::string_view text, const ConfigOverrides& overrides = {});

/// Throws ConfigError when the file cannot be read.
SimConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

/// Every key with its resolved value; feeding the output back to
/// resolve_config reproduces the same config.
std::string dump_config(const SimConfig& cfg);

const std::vector<std::string>& config_keys();

}  // namespace rovctl
