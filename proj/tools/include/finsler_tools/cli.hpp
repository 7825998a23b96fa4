#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "finsler/tensor.hpp"

namespace finsler::tools {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kConfigEnv = "FINSLER_CONFIG";

enum ExitCode { kExitOk = 0, kExitInput = 1, kExitNumerical = 2 };

std::string tool_version();

nlohmann::json tensor_json(const TensorTable& t);

// Aligned key/value rendering of a report; row arrays become tables.
std::string render_text(const nlohmann::json& report);

// args excludes the program name. Reports go to out, diagnostics to err.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace finsler::tools
