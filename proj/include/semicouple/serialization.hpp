#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "semicouple/experiments.hpp"
#include "semicouple/invariants.hpp"
#include "semicouple/laguerre.hpp"
#include "semicouple/semicoupling.hpp"

namespace semicouple {

using Json = nlohmann::json;

inline constexpr int kPlanSchemaVersion = 1;
inline constexpr int kDiagramSchemaVersion = 1;
inline constexpr int kReportSchemaVersion = 1;

// {"kind":"power","p":2}, {"kind":"concave_log","d":2,"alpha":1},
// {"kind":"table","breakpoints":[[r, theta], ...]}; optional "outer" and
// "inner" multipliers.
Json scale_to_json(const CostScale& scale);
CostScale scale_from_json(const Json& j);

Json box_to_json(const Box& box);
Box box_from_json(const Json& j);

Json pattern_to_json(const PointPattern& pattern);
PointPattern pattern_from_json(const Json& j);

Json grid_to_json(const GridMeasure& grid);
GridMeasure grid_from_json(const Json& j);

// Assignment and mask are stored as [[value, run], ...].
Json plan_to_json(const TransportPlan& plan);
TransportPlan plan_from_json(const Json& j);

// Cells are rebuilt from pattern and weights on reading; their boundaries are
// written for downstream tools.
Json diagram_to_json(const LaguerreDiagram& diagram);
LaguerreDiagram diagram_from_json(const Json& j);

Json check_to_json(const CheckReport& report);
Json estimate_to_json(const EstimateRecord& record);
Json inequality_to_json(const InequalityReport& report);
Json stabilization_to_json(const StabilizationRecord& record);
Json bounds_to_json(const BoundsReport& report);

// Header plus one row per record: quantity,n,d,scale,beta,replicas,mean,stderr,seed.
std::string estimates_csv(const std::vector<EstimateRecord>& records);

// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace semicouple
