#pragma once

#include <istream>
#include <string>

#include "smpc/scenario.hpp"

namespace smpc {

/// Reads an INI-style scenario file. Missing keys keep their defaults.
/// Throws ConfigError on unknown values, malformed numbers or failed validation.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(std::istream& in);

StepProfile parse_profile(const std::string& text);
std::string format_profile(const StepProfile& profile);

}  // namespace smpc
