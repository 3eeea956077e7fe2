#pragma once

#include <string_view>

namespace tcmesh {

inline constexpr std::string_view kToolName = "tcmesh";
inline constexpr std::string_view kToolVersion = "0.1.0";

// Bumped whenever the report.json layout changes; see docs/report.schema.json.
inline constexpr int kReportSchemaVersion = 1;

}  // namespace tcmesh
