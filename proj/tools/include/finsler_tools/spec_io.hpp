#pragma once

#include <string>

#include <json.hpp>

#include "finsler/metric.hpp"

namespace finsler::tools {

// Metric-spec files, schema version 1:
// {"schema_version": 1, "family": "...", "dimension": n,
//  "coefficients": {"a11": "...", "b1": "...", "F": "..."},
//  "parameters": {"name": value}, "measure": "...",
//  "curve": {"coordinates": ["...", ...], "a": 0, "b": 1}}
MetricSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const MetricSpec& spec);
MetricSpec load_spec(const std::string& path);

}  // namespace finsler::tools
