#include "ssdnn/bias.hpp"

#include <cmath>
#include <string>

#include "ssdnn/sizing.hpp"

namespace ssdnn {
namespace {

constexpr std::uint64_t kBiasStream = 0x42494153;  // "BIAS"

void check_sizes(std::size_t b, std::size_t b1, std::size_t b2) {
  if (b2 == 0 || b2 >= b1)
    throw ConfigError("bias estimation: need 0 < b2 < b1 (b1=" + std::to_string(b1) +
                      ", b2=" + std::to_string(b2) + ")");
  if (b1 > b / 2)
    throw ConfigError("bias estimation: need b1 <= b/2 (b1=" + std::to_string(b1) +
                      ", b=" + std::to_string(b) + ")");
}

}  // namespace

double PowerLaw::at(double b) const { return c_b * std::pow(b, -lambda / 2.0); }

double raw_bias_average(const Eigen::VectorXd& member_preds, double reference_mean) {
  if (member_preds.size() < 2)
    throw ConfigError("bias estimation: at least two small-sample blocks are required");
  return member_preds.mean() - reference_mean;
}

double raw_bias_average(const Dataset& data, const BlockPlan& plan_i, const NetworkSpec& spec_i,
                        const TrainConfig& cfg, double reference_mean, const Eigen::VectorXd& x,
                        unsigned threads) {
  if (plan_i.q < 2)
    throw ConfigError("bias estimation: at least two small-sample blocks are required");
  const auto ensemble = fit_subagging(data, plan_i, spec_i, cfg, threads);
  return raw_bias_average(predict_members(ensemble, x), reference_mean);
}

PowerLaw solve_power_law(double b1_size, double b1_hat, double b2_size, double b2_hat) {
  if (!(b1_size > 0) || !(b2_size > 0) || b1_size == b2_size)
    throw ConfigError("bias estimation: subsample sizes must be positive and distinct");
  if (b1_hat == 0.0 || b2_hat == 0.0 || std::signbit(b1_hat) != std::signbit(b2_hat) ||
      !std::isfinite(b1_hat) || !std::isfinite(b2_hat))
    throw NoPowerLawFit(b1_hat, b2_hat);
  // ln B_i = ln c_b - (lambda/2) ln b_i, solved for (lambda, ln|c_b|).
  PowerLaw fit;
  fit.lambda = 2.0 * std::log(b1_hat / b2_hat) / std::log(b2_size / b1_size);
  fit.c_b = b1_hat * std::pow(b1_size, fit.lambda / 2.0);
  return fit;
}

BiasEstimate scale_down_bias(std::size_t b, double reference_mean, std::size_t b1,
                             const Eigen::VectorXd& preds_b1, std::size_t b2,
                             const Eigen::VectorXd& preds_b2) {
  check_sizes(b, b1, b2);
  BiasEstimate est;
  est.b = b;
  est.b1 = b1;
  est.b2 = b2;
  est.b1_hat = raw_bias_average(preds_b1, reference_mean);
  est.b2_hat = raw_bias_average(preds_b2, reference_mean);
  const PowerLaw fit = solve_power_law(static_cast<double>(b1), est.b1_hat,
                                       static_cast<double>(b2), est.b2_hat);
  est.lambda_hat = fit.lambda;
  est.c_b_hat = fit.c_b;
  est.bias_at_b = est.b1_hat * std::pow(static_cast<double>(b) / static_cast<double>(b1),
                                        -fit.lambda / 2.0);
  return est;
}

std::size_t default_b1(std::size_t b) { return b / 2; }
std::size_t default_b2(std::size_t b) { return b / 4; }

BiasEstimate estimate_bias(const Dataset& data, const SubaggingEnsemble& ensemble,
                           const TrainConfig& cfg, const Eigen::VectorXd& x, std::size_t b1,
                           std::size_t b2, unsigned threads) {
  const std::size_t b = ensemble.plan.b;
  check_sizes(b, b1, b2);
  const std::size_t n = static_cast<std::size_t>(data.size());
  const double reference = predict_mean(ensemble, x);

  Eigen::VectorXd preds[2];
  const std::size_t sizes[2] = {b1, b2};
  for (int level = 0; level < 2; ++level) {
    const BlockPlan plan_i = make_plan(n, sizes[level], sizes[level]);
    if (plan_i.q < 2)
      throw ConfigError("bias estimation: b_" + std::to_string(level + 1) +
                        " leaves fewer than two blocks");
    const NetworkSpec spec_i = auto_spec(ensemble.spec.input_dim, ensemble.spec.depth(), sizes[level]);
    TrainConfig level_cfg = cfg;
    level_cfg.seed = derive_seed(cfg.seed, kBiasStream, static_cast<std::uint64_t>(level + 1));
    preds[level] = predict_members(fit_subagging(data, plan_i, spec_i, level_cfg, threads), x);
  }
  return scale_down_bias(b, reference, b1, preds[0], b2, preds[1]);
}

BiasEstimate estimate_bias(const Dataset& data, const BlockPlan& plan, const NetworkSpec& spec,
                           const TrainConfig& cfg, const Eigen::VectorXd& x, std::size_t b1,
                           std::size_t b2, unsigned threads) {
  check_sizes(plan.b, b1, b2);
  const auto ensemble = fit_subagging(data, plan, spec, cfg, threads);
  return estimate_bias(data, ensemble, cfg, x, b1, b2, threads);
}

}  // namespace ssdnn
