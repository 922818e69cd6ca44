#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ssdnn/dataset.hpp"

namespace ssdnn {

enum class SimModelId { M1, M2, M3, M4 };

/// One of the four regression models with standard normal covariates:
///   M1: sum_{i<=10} x_i
///   M2: sum_{i<=10} i * x_i
///   M3: x_1^2 + sin(x_2 + x_3)
///   M4: x_1^2 + sin(x_2 + x_3) + exp(-|x_4 + x_5|)
/// plus N(0, 1) noise unless the noise-free variant is selected.
struct SimModel {
  SimModelId id = SimModelId::M1;
  bool noise = true;

  Index input_dim() const;
  double noise_sigma() const { return noise ? 1.0 : 0.0; }
};

std::string to_string(SimModelId id);
std::optional<SimModelId> parse_model_id(std::string_view name);

double true_f(const SimModel& model, const Eigen::VectorXd& x);
Eigen::VectorXd true_f_batch(const SimModel& model, const Eigen::MatrixXd& x);

/// n rows drawn row by row: d covariates then one error, all from
/// Rng(derive_seed(seed, kTrainDataStream)). eps is always recorded.
Dataset generate(const SimModel& model, std::size_t n, std::uint64_t seed);

/// Held-out points from their own stream (kTestDataStream), so they never
/// coincide with a training draw sharing the same seed.
Dataset fixed_test_points(const SimModel& model, std::size_t count = 10, std::uint64_t seed = 0);

inline constexpr std::uint64_t kTrainDataStream = 0x44415441;  // "DATA"
inline constexpr std::uint64_t kTestDataStream = 0x54455354;   // "TEST"

}  // namespace ssdnn
