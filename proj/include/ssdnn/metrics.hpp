#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <utility>

#include "ssdnn/intervals.hpp"
#include "ssdnn/simulation.hpp"

namespace ssdnn {

struct ErrorReport {
  double mse1 = 0.0;   // mean (fhat(x_i) - y_i)^2 on training data
  double mse2 = 0.0;   // mean (fhat(x_i) - f(x_i))^2 on training data
  double mspe1 = 0.0;  // same on test data
  double mspe2 = 0.0;
  double sigma2_hat = 0.0;       // mean eps_i^2, training
  double sigma2_hat_test = 0.0;  // mean eps_i^2, test

  /// Distance of MSE-1 from the error variance; smaller is better.
  double mse1_gap() const;
};

/// (mean (pred - y)^2, mean (pred - f)^2).
std::pair<double, double> mse_pair(const Eigen::VectorXd& preds, const Eigen::VectorXd& ys,
                                   const Eigen::VectorXd& true_fs);

/// mean eps^2.
double error_variance(const Eigen::VectorXd& eps);

struct CoverageReport {
  double ecr = 0.0;
  double el = 0.0;
  IntervalMethod method = IntervalMethod::QCI1;
  double delta = 0.1;
  std::size_t count = 0;
};

/// Fraction of targets inside their (closed) interval and mean length.
/// All intervals must share method and delta.
CoverageReport coverage(std::span<const IntervalResult> intervals,
                        std::span<const double> targets);

/// Fraction of `draws` fresh responses f(x_t) + eps inside the interval.
double conditional_pi_coverage(const IntervalResult& pi, const SimModel& model,
                               const Eigen::VectorXd& x_t, std::size_t draws, std::uint64_t seed);

}  // namespace ssdnn
