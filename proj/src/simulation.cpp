#include "ssdnn/simulation.hpp"

#include <cmath>

#include "ssdnn/random.hpp"

namespace ssdnn {
namespace {

Dataset draw(const SimModel& model, std::size_t n, Rng& rng) {
  const Index d = model.input_dim();
  const auto cols = static_cast<Index>(n);
  Dataset data{Eigen::MatrixXd(d, cols), Eigen::VectorXd(cols), Eigen::VectorXd(cols)};
  for (Index i = 0; i < cols; ++i) {
    for (Index k = 0; k < d; ++k) data.x(k, i) = rng.normal();
    // The draw is made either way so both variants share their covariates.
    const double z = rng.normal();
    const double e = model.noise ? z * model.noise_sigma() : 0.0;
    (*data.eps)(i) = e;
    data.y(i) = true_f(model, data.x.col(i)) + e;
  }
  return data;
}

}  // namespace

Index SimModel::input_dim() const {
  switch (id) {
    case SimModelId::M1:
    case SimModelId::M2: return 10;
    case SimModelId::M3: return 3;
    case SimModelId::M4: return 5;
  }
  return 0;
}

std::string to_string(SimModelId id) {
  switch (id) {
    case SimModelId::M1: return "M1";
    case SimModelId::M2: return "M2";
    case SimModelId::M3: return "M3";
    case SimModelId::M4: return "M4";
  }
  return "?";
}

std::optional<SimModelId> parse_model_id(std::string_view name) {
  for (auto id : {SimModelId::M1, SimModelId::M2, SimModelId::M3, SimModelId::M4})
    if (to_string(id) == name || to_string(id).substr(1) == name) return id;
  return std::nullopt;
}

double true_f(const SimModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.input_dim())
    throw DataError("model " + to_string(model.id) + " expects " +
                    std::to_string(model.input_dim()) + " covariates, got " +
                    std::to_string(x.size()));
  switch (model.id) {
    case SimModelId::M1: return x.sum();
    case SimModelId::M2: return x.dot(Eigen::VectorXd::LinSpaced(10, 1.0, 10.0));
    case SimModelId::M3: return x(0) * x(0) + std::sin(x(1) + x(2));
    case SimModelId::M4:
      return x(0) * x(0) + std::sin(x(1) + x(2)) + std::exp(-std::abs(x(3) + x(4)));
  }
  return 0.0;
}

Eigen::VectorXd true_f_batch(const SimModel& model, const Eigen::MatrixXd& x) {
  Eigen::VectorXd out(x.cols());
  for (Index i = 0; i < x.cols(); ++i) out(i) = true_f(model, x.col(i));
  return out;
}

Dataset generate(const SimModel& model, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("generate: n must be >= 1");
  Rng rng(derive_seed(seed, kTrainDataStream));
  return draw(model, n, rng);
}

Dataset fixed_test_points(const SimModel& model, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw ConfigError("test points: count must be >= 1");
  Rng rng(derive_seed(seed, kTestDataStream, static_cast<std::uint64_t>(model.id)));
  return draw(model, count, rng);
}

}  // namespace ssdnn
