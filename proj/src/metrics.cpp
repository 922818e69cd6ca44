#include "ssdnn/metrics.hpp"

#include <cmath>

#include "ssdnn/random.hpp"

namespace ssdnn {

double ErrorReport::mse1_gap() const { return std::abs(mse1 - sigma2_hat); }

std::pair<double, double> mse_pair(const Eigen::VectorXd& preds, const Eigen::VectorXd& ys,
                                   const Eigen::VectorXd& true_fs) {
  if (preds.size() == 0 || preds.size() != ys.size() || preds.size() != true_fs.size())
    throw DataError("mse: predictions, responses and true values must have equal nonzero length");
  return {(preds - ys).squaredNorm() / static_cast<double>(preds.size()),
          (preds - true_fs).squaredNorm() / static_cast<double>(preds.size())};
}

double error_variance(const Eigen::VectorXd& eps) {
  if (eps.size() == 0) throw DataError("error variance: empty input");
  return eps.squaredNorm() / static_cast<double>(eps.size());
}

CoverageReport coverage(std::span<const IntervalResult> intervals,
                        std::span<const double> targets) {
  if (intervals.empty() || intervals.size() != targets.size())
    throw DataError("coverage: intervals and targets must have equal nonzero length");
  CoverageReport report;
  report.method = intervals.front().method;
  report.delta = intervals.front().nominal_delta;
  report.count = intervals.size();
  std::size_t hits = 0;
  double total_length = 0.0;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (intervals[i].contains(targets[i])) ++hits;
    total_length += intervals[i].length();
  }
  report.ecr = static_cast<double>(hits) / static_cast<double>(intervals.size());
  report.el = total_length / static_cast<double>(intervals.size());
  return report;
}

double conditional_pi_coverage(const IntervalResult& pi, const SimModel& model,
                               const Eigen::VectorXd& x_t, std::size_t draws, std::uint64_t seed) {
  if (draws < 1) throw ConfigError("conditional coverage: need at least one draw");
  const double f = true_f(model, x_t);
  Rng rng(seed);
  std::size_t hits = 0;
  for (std::size_t s = 0; s < draws; ++s)
    if (pi.contains(f + model.noise_sigma() * rng.normal())) ++hits;
  return static_cast<double>(hits) / static_cast<double>(draws);
}

}  // namespace ssdnn
