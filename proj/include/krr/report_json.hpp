#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "krr/krr_engine.hpp"
#include "krr/report.hpp"

namespace krr {

/// Stable key order (alphabetical, nlohmann's object order); optional fields
/// are omitted when absent, warnings when empty. Reports round-trip through
/// report_from_json.
nlohmann::json report_to_json(const ReliabilityReport& report);
ReliabilityReport report_from_json(const nlohmann::json& j);

nlohmann::json curve_row_to_json(const CurveRow& row);
std::string curve_to_csv(const Curve& curve);

}  // namespace krr
