#pragma once

#include <Eigen/Dense>

#include <cstddef>

#include "ssdnn/adam.hpp"
#include "ssdnn/block_plan.hpp"
#include "ssdnn/dataset.hpp"
#include "ssdnn/subagging.hpp"

namespace ssdnn {

/// Bias model B(b) = c_b * b^{-lambda/2}.
struct PowerLaw {
  double lambda = 0.0;
  double c_b = 0.0;

  double at(double b) const;
};

/// Output of scaling-down bias estimation at one point.
struct BiasEstimate {
  double lambda_hat = 0.0;
  double c_b_hat = 0.0;
  double b1_hat = 0.0;
  double b2_hat = 0.0;
  double bias_at_b = 0.0;  // b1_hat * (b / b1)^{-lambda_hat / 2}
  std::size_t b = 0;
  std::size_t b1 = 0;
  std::size_t b2 = 0;
};

/// Mean of (member prediction - reference_mean). Needs at least two members.
double raw_bias_average(const Eigen::VectorXd& member_preds, double reference_mean);

/// Trains the q_i small-sample networks of plan_i and averages their
/// deviation from reference_mean at x.
double raw_bias_average(const Dataset& data, const BlockPlan& plan_i, const NetworkSpec& spec_i,
                        const TrainConfig& cfg, double reference_mean, const Eigen::VectorXd& x,
                        unsigned threads = 0);

/// Fits B1 = c_b b1^{-lambda/2}, B2 = c_b b2^{-lambda/2} exactly via logs.
/// Throws NoPowerLawFit when B1 and B2 are zero or differ in sign.
PowerLaw solve_power_law(double b1_size, double b1_hat, double b2_size, double b2_hat);

/// Steps 3 and 4 from the raw small-sample predictions at one point.
BiasEstimate scale_down_bias(std::size_t b, double reference_mean, std::size_t b1,
                             const Eigen::VectorXd& preds_b1, std::size_t b2,
                             const Eigen::VectorXd& preds_b2);

/// Default small-sample sizes: b/2 and b/4.
std::size_t default_b1(std::size_t b);
std::size_t default_b2(std::size_t b);

/// Full procedure reusing an already fitted ensemble as the reference.
/// Small-sample networks keep the ensemble's depth with widths sized so that
/// param_count <= b_i. Requires b2 < b1 <= b/2.
BiasEstimate estimate_bias(const Dataset& data, const SubaggingEnsemble& ensemble,
                           const TrainConfig& cfg, const Eigen::VectorXd& x, std::size_t b1,
                           std::size_t b2, unsigned threads = 0);

/// Full procedure, fitting the reference ensemble first.
BiasEstimate estimate_bias(const Dataset& data, const BlockPlan& plan, const NetworkSpec& spec,
                           const TrainConfig& cfg, const Eigen::VectorXd& x, std::size_t b1,
                           std::size_t b2, unsigned threads = 0);

}  // namespace ssdnn
