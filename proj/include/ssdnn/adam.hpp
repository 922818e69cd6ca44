#pragma once

#include <cmath>
#include <cstdint>

#include "ssdnn/network.hpp"

namespace ssdnn {

/// Optimizer and schedule settings for one training run.
struct TrainConfig {
  Index epochs = 200;
  Index batch_size = 10;
  double learning_rate = 0.01;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 0;

  void validate() const {
    if (epochs < 0) throw ConfigError("train: epochs must be >= 0");
    if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
    if (!(learning_rate > 0)) throw ConfigError("train: learning_rate must be > 0");
    if (!(adam_beta1 > 0 && adam_beta1 < 1) || !(adam_beta2 > 0 && adam_beta2 < 1))
      throw ConfigError("train: Adam betas must lie in (0, 1)");
    if (!(adam_epsilon > 0)) throw ConfigError("train: Adam epsilon must be > 0");
  }
};

template <typename Scalar>
struct AdamState {
  NetworkParams<Scalar> first_moment;
  NetworkParams<Scalar> second_moment;
  std::int64_t step_count = 0;

  AdamState() = default;
  explicit AdamState(const NetworkSpec& spec) : first_moment(spec), second_moment(spec) {}
};

/// One bias-corrected Adam update in place.
template <typename Scalar>
void adam_step(NetworkParams<Scalar>& params, AdamState<Scalar>& state,
               const NetworkParams<Scalar>& grad, const TrainConfig& cfg) {
  if (!grad.same_shape(params)) throw ConfigError("adam: gradient shape mismatch");
  if (!state.first_moment.same_shape(params)) state = AdamState<Scalar>(params.spec());

  const auto beta1 = static_cast<Scalar>(cfg.adam_beta1);
  const auto beta2 = static_cast<Scalar>(cfg.adam_beta2);
  const auto eps = static_cast<Scalar>(cfg.adam_epsilon);
  const auto lr = static_cast<Scalar>(cfg.learning_rate);

  ++state.step_count;
  const auto t = static_cast<Scalar>(state.step_count);
  const Scalar correction1 = Scalar(1) - std::pow(beta1, t);
  const Scalar correction2 = Scalar(1) - std::pow(beta2, t);

  auto m = state.first_moment.values().array();
  auto v = state.second_moment.values().array();
  const auto g = grad.values().array();
  m = beta1 * m + (Scalar(1) - beta1) * g;
  v = beta2 * v + (Scalar(1) - beta2) * g.square();
  params.values().array() -= lr * (m / correction1) / ((v / correction2).sqrt() + eps);
}

}  // namespace ssdnn
