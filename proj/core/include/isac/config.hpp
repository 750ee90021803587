// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "isac/model.hpp"

namespace isac {

/// Parses a JSON scenario document. Keys missing from the document keep the
/// values of `defaults`; unknown keys are rejected. Angles are given in
/// degrees (`*_deg`) and powers in dB (`*_db`), except `total_power_w`.
Scenario parse_scenario(std::string_view json_text, const Scenario& defaults = default_scenario());
Scenario load_scenario(const std::filesystem::path& path, const Scenario& defaults = default_scenario());

/// Serializes every scenario key in the file-boundary units.
std::string scenario_to_json(const Scenario& scenario, int indent = 2);

}  // namespace isac
