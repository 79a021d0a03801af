#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "otstruct/bottleneck.hpp"
#include "otstruct/bounds.hpp"
#include "otstruct/solver.hpp"
#include "otstruct/structure.hpp"

namespace otstruct {

// Structured output. Exact values are written as canonical strings; values
// that may be irrational also carry a decimal approximation.

nlohmann::json to_json(const Rational& r);
nlohmann::json to_json(const RootSum& v);
nlohmann::json to_json(const CostValue& c);
nlohmann::json to_json(const TransportPlan& plan);
nlohmann::json to_json(const DualPotentials& potentials);
nlohmann::json to_json(const DiffusiveModel& model);
nlohmann::json to_json(const PeelTrace& trace);
nlohmann::json to_json(const HallCut& cut);
nlohmann::json to_json(const ThresholdCertificate& cert);
nlohmann::json to_json(const TrimVerdict& verdict);
nlohmann::json to_json(const BruteForceResult& result);
nlohmann::json to_json(const PowerIdentityReport& report);
nlohmann::json to_json(const Corollary1Report& report);
nlohmann::json to_json(const BoundReport& report);
nlohmann::json to_json(const CounterexampleReport& report);

/// Plan documents: {"instance_hash", "m", "n", "entries": [[i, j, "mass"]]},
/// optionally with the path of the instance they belong to.
nlohmann::json plan_document(const TransportPlan& plan, const Instance& instance,
                             const std::optional<std::string>& instance_path = std::nullopt);

struct PlanFile {
  TransportPlan plan;
  std::string instance_hash;
  std::optional<std::string> instance_path;
};

PlanFile plan_from_json(const nlohmann::json& doc);
PlanFile load_plan(const std::string& path);

/// Loose check for whether a document is a plan rather than an instance.
bool looks_like_plan(const nlohmann::json& doc);

nlohmann::json load_json_file(const std::string& path);

/// Human-readable renderings used by the text output format.
std::string plan_text(const TransportPlan& plan);
std::string model_text(const DiffusiveModel& model);
std::string trace_text(const PeelTrace& trace);

}  // namespace otstruct
