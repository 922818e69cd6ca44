#include "ssdnn/serialize.hpp"

#include <fstream>

namespace ssdnn {
namespace {

constexpr const char* kFormat = "ssdnn-ensemble";
constexpr int kVersion = 1;

using json = nlohmann::json;

}  // namespace

json to_json(const NetworkSpec& spec) {
  return json{{"input_dim", spec.input_dim},
              {"hidden_widths", spec.hidden_widths},
              {"output_dim", spec.output_dim}};
}

NetworkSpec spec_from_json(const json& j) {
  NetworkSpec spec{j.at("input_dim").get<Index>(), j.at("hidden_widths").get<std::vector<Index>>(),
                   j.at("output_dim").get<Index>()};
  spec.validate();
  return spec;
}

json to_json(const BlockPlan& plan) {
  return json{{"n", plan.n}, {"b", plan.b}, {"h", plan.h}, {"q", plan.q}};
}

BlockPlan plan_from_json(const json& j) {
  return BlockPlan{j.at("n").get<std::size_t>(), j.at("b").get<std::size_t>(),
                   j.at("h").get<std::size_t>(), j.at("q").get<std::size_t>()};
}

json to_json(const SubaggingEnsemble& ensemble) {
  json members = json::array();
  for (std::size_t j = 0; j < ensemble.size(); ++j) {
    const auto& values = ensemble.models[j].values();
    members.push_back({{"seed", ensemble.seeds.at(j)},
                       {"train_seconds", ensemble.train_seconds.at(j)},
                       {"values", std::vector<double>(values.data(), values.data() + values.size())}});
  }
  return json{{"plan", to_json(ensemble.plan)},
              {"spec", to_json(ensemble.spec)},
              {"total_seconds", ensemble.total_seconds},
              {"members", std::move(members)}};
}

SubaggingEnsemble ensemble_from_json(const json& j) {
  SubaggingEnsemble ensemble;
  ensemble.plan = plan_from_json(j.at("plan"));
  ensemble.spec = spec_from_json(j.at("spec"));
  ensemble.total_seconds = j.at("total_seconds").get<double>();
  for (const auto& member : j.at("members")) {
    Network params(ensemble.spec);
    const auto values = member.at("values").get<std::vector<double>>();
    if (static_cast<Index>(values.size()) != params.size())
      throw DataError("ensemble file: member has " + std::to_string(values.size()) +
                      " parameters, spec needs " + std::to_string(params.size()));
    params.values() = Eigen::Map<const Eigen::VectorXd>(values.data(), params.size());
    ensemble.models.push_back(std::move(params));
    ensemble.seeds.push_back(member.at("seed").get<std::uint64_t>());
    ensemble.train_seconds.push_back(member.at("train_seconds").get<double>());
  }
  if (ensemble.models.size() != ensemble.plan.q)
    throw DataError("ensemble file: member count does not match plan q");
  return ensemble;
}

json to_json(const FittedModel& model) {
  json j{{"format", kFormat},
         {"version", kVersion},
         {"beta", model.beta},
         {"overlap", model.overlap},
         {"ensemble", to_json(model.ensemble)}};
  if (model.iterated) {
    const auto& stage = *model.iterated;
    json blocks = json::array();
    for (const auto& block : stage.blocks) blocks.push_back(to_json(block));
    j["iterated"] = json{{"beta", stage.beta},
                         {"outer_plan", to_json(stage.outer_plan)},
                         {"inner_plan", to_json(stage.inner_plan)},
                         {"inner_spec", to_json(stage.inner_spec)},
                         {"total_seconds", stage.total_seconds},
                         {"blocks", std::move(blocks)}};
  }
  return j;
}

FittedModel fitted_model_from_json(const json& j) {
  if (j.value("format", "") != kFormat || j.value("version", 0) != kVersion)
    throw DataError("not an ssdnn ensemble file (format/version mismatch)");
  FittedModel model;
  model.beta = j.at("beta").get<double>();
  model.overlap = j.at("overlap").get<double>();
  model.ensemble = ensemble_from_json(j.at("ensemble"));
  if (j.contains("iterated")) {
    const auto& it = j.at("iterated");
    IteratedStage stage;
    stage.beta = it.at("beta").get<double>();
    stage.outer_plan = plan_from_json(it.at("outer_plan"));
    stage.inner_plan = plan_from_json(it.at("inner_plan"));
    stage.inner_spec = spec_from_json(it.at("inner_spec"));
    stage.total_seconds = it.at("total_seconds").get<double>();
    for (const auto& block : it.at("blocks")) stage.blocks.push_back(ensemble_from_json(block));
    model.iterated = std::move(stage);
  }
  return model;
}

void save_model(const std::string& path, const FittedModel& model) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << to_json(model).dump() << '\n';
  if (!out) throw DataError("write to " + path + " failed");
}

FittedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    return fitted_model_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace ssdnn
