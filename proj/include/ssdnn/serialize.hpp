#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "ssdnn/subagging.hpp"

namespace ssdnn {

/// Everything `fit` produces and the interval commands consume.
struct FittedModel {
  double beta = 0.7;
  double overlap = 1.0;
  SubaggingEnsemble ensemble;
  std::optional<IteratedStage> iterated;
};

nlohmann::json to_json(const NetworkSpec& spec);
NetworkSpec spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BlockPlan& plan);
BlockPlan plan_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SubaggingEnsemble& ensemble);
SubaggingEnsemble ensemble_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FittedModel& model);
FittedModel fitted_model_from_json(const nlohmann::json& j);

/// JSON file; every double is written in a form that parses back to the
/// identical value.
void save_model(const std::string& path, const FittedModel& model);
FittedModel load_model(const std::string& path);

}  // namespace ssdnn
