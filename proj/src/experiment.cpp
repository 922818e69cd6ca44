#include "ssdnn/experiment.hpp"

#include <chrono>
#include <map>

#include "ssdnn/train.hpp"

namespace ssdnn {
namespace {

using Clock = std::chrono::steady_clock;
using json = nlohmann::json;

constexpr std::uint64_t kReplicationDataStream = 0x52444154;   // "RDAT"
constexpr std::uint64_t kReplicationTrainStream = 0x52545241;  // "RTRA"
constexpr std::uint64_t kReplicationTestStream = 0x52545354;   // "RTST"
constexpr std::uint64_t kMonteCarloStream = 0x4d435354;        // "MCST"
constexpr std::uint64_t kBaselineStream = 0x42415345;          // "BASE"

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ExperimentConfig with_train_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  ExperimentConfig out = cfg;
  out.train.seed = seed;
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n < 2) throw ConfigError("experiment: n must be >= 2");
  if (!(beta > 0 && beta < 1)) throw ConfigError("experiment: beta must lie in (0, 1)");
  if (!(overlap > 0)) throw ConfigError("experiment: overlap must be > 0");
  if (widths.empty() && depth < 1) throw ConfigError("experiment: depth must be >= 1");
  for (double d : deltas)
    if (!(d > 0 && d < 1)) throw ConfigError("experiment: every delta must lie in (0, 1)");
  if (replications < 1) throw ConfigError("experiment: replications must be >= 1");
  if (test_points < 1) throw ConfigError("experiment: test point count must be >= 1");
  train.validate();
}

NetworkSpec member_spec(const ExperimentConfig& cfg, Index input_dim, std::size_t b) {
  if (!cfg.widths.empty()) return NetworkSpec{input_dim, cfg.widths, 1};
  return auto_spec(input_dim, cfg.depth, b);
}

NetworkSpec iterated_member_spec(const ExperimentConfig& cfg, Index input_dim,
                                 std::size_t inner_b) {
  if (!cfg.iterated_widths.empty()) return NetworkSpec{input_dim, cfg.iterated_widths, 1};
  const Index depth = cfg.widths.empty() ? cfg.depth : static_cast<Index>(cfg.widths.size());
  return auto_spec(input_dim, depth, inner_b);
}

std::uint64_t replication_data_seed(const ExperimentConfig& cfg, std::size_t rep) {
  return derive_seed(cfg.seed, kReplicationDataStream, rep);
}
std::uint64_t replication_train_seed(const ExperimentConfig& cfg, std::size_t rep) {
  return derive_seed(cfg.seed, kReplicationTrainStream, rep);
}
std::uint64_t replication_test_seed(const ExperimentConfig& cfg, std::size_t rep) {
  return derive_seed(cfg.seed, kReplicationTestStream, rep);
}
std::uint64_t replication_mc_seed(const ExperimentConfig& cfg, std::size_t rep,
                                  std::size_t point) {
  return derive_seed(derive_seed(cfg.seed, kMonteCarloStream, rep), kMonteCarloStream, point);
}

FittedModel fit_model(const ExperimentConfig& cfg, const Dataset& data, bool with_iterated) {
  const auto n = static_cast<std::size_t>(data.size());
  const BlockPlan plan = plan_from_beta(n, cfg.beta, cfg.overlap);
  FittedModel model;
  model.beta = cfg.beta;
  model.overlap = cfg.overlap;
  model.ensemble =
      fit_subagging(data, plan, member_spec(cfg, data.dim(), plan.b), cfg.train, cfg.threads);
  if (with_iterated) {
    const BlockPlan inner = iterated_plan(plan, cfg.beta);
    model.iterated = fit_iterated(data, plan, iterated_member_spec(cfg, data.dim(), inner.b),
                                  cfg.train, cfg.beta, cfg.threads);
  }
  return model;
}

Eigen::VectorXd true_values(const Dataset& data, const std::optional<SimModel>& model) {
  if (model) return true_f_batch(*model, data.x);
  if (data.eps) return data.y - *data.eps;
  throw DataError("true regression values unavailable: no eps column and no model given");
}

ErrorReport evaluate_errors(const Eigen::VectorXd& train_pred, const Dataset& train,
                            const Eigen::VectorXd& train_f, const Eigen::VectorXd& test_pred,
                            const Dataset& test, const Eigen::VectorXd& test_f) {
  ErrorReport report;
  std::tie(report.mse1, report.mse2) = mse_pair(train_pred, train.y, train_f);
  std::tie(report.mspe1, report.mspe2) = mse_pair(test_pred, test.y, test_f);
  report.sigma2_hat = error_variance(train.y - train_f);
  report.sigma2_hat_test = error_variance(test.y - test_f);
  if (train.eps) report.sigma2_hat = error_variance(*train.eps);
  if (test.eps) report.sigma2_hat_test = error_variance(*test.eps);
  return report;
}

std::vector<EstimatorResult> compare_estimators(const ExperimentConfig& cfg, const Dataset& train,
                                                const Eigen::VectorXd& train_f,
                                                const Dataset& test,
                                                const Eigen::VectorXd& test_f) {
  std::vector<EstimatorResult> results;
  const FittedModel ss = fit_model(cfg, train, false);
  results.push_back({"SS-DNN", ss.ensemble.spec,
                     evaluate_errors(predict_mean_batch(ss.ensemble, train.x), train, train_f,
                                     predict_mean_batch(ss.ensemble, test.x), test, test_f),
                     ss.ensemble.total_seconds});

  const auto n = static_cast<std::size_t>(train.size());
  for (std::size_t k = 0; k < cfg.baselines.size(); ++k) {
    const Baseline which = cfg.baselines[k];
    const NetworkSpec spec = baseline_spec(which, ss.ensemble.spec, n);
    TrainConfig tc = cfg.train;
    tc.seed = derive_seed(cfg.train.seed, kBaselineStream, static_cast<std::uint64_t>(which));
    const auto start = Clock::now();
    const Network net = ssdnn::train(spec, train.x, train.y.transpose(), tc);
    const double seconds = seconds_since(start);
    const Eigen::VectorXd train_pred = forward(net, train.x).transpose();
    const Eigen::VectorXd test_pred = forward(net, test.x).transpose();
    results.push_back({to_string(which), spec,
                       evaluate_errors(train_pred, train, train_f, test_pred, test, test_f),
                       seconds});
  }
  return results;
}

std::vector<EstimatorResult> run_point_replication(const ExperimentConfig& cfg, std::size_t rep) {
  const Dataset train = generate(cfg.model, cfg.n, replication_data_seed(cfg, rep));
  const Dataset test = generate(cfg.model, cfg.test_n, replication_test_seed(cfg, rep));
  return compare_estimators(with_train_seed(cfg, replication_train_seed(cfg, rep)), train,
                            true_f_batch(cfg.model, train.x), test,
                            true_f_batch(cfg.model, test.x));
}

std::vector<EstimatorResult> average_estimators(
    std::span<const std::vector<EstimatorResult>> replications) {
  if (replications.empty()) return {};
  std::vector<EstimatorResult> mean = replications.front();
  for (auto& r : mean) {
    r.errors = ErrorReport{};
    r.train_seconds = 0.0;
  }
  const double k = static_cast<double>(replications.size());
  for (const auto& rep : replications) {
    if (rep.size() != mean.size()) throw ConfigError("average: replications differ in shape");
    for (std::size_t i = 0; i < rep.size(); ++i) {
      auto& acc = mean[i].errors;
      const auto& e = rep[i].errors;
      acc.mse1 += e.mse1 / k;
      acc.mse2 += e.mse2 / k;
      acc.mspe1 += e.mspe1 / k;
      acc.mspe2 += e.mspe2 / k;
      acc.sigma2_hat += e.sigma2_hat / k;
      acc.sigma2_hat_test += e.sigma2_hat_test / k;
      mean[i].train_seconds += rep[i].train_seconds / k;
    }
  }
  return mean;
}

std::optional<bool> IntervalRecord::covered() const {
  if (!target) return std::nullopt;
  return interval.contains(*target);
}

std::vector<IntervalRecord> confidence_intervals(const FittedModel& model, const Dataset& test,
                                                 const std::optional<Eigen::VectorXd>& targets,
                                                 std::span<const IntervalMethod> methods,
                                                 std::span<const double> deltas) {
  const auto& ensemble = model.ensemble;
  if (test.dim() != ensemble.spec.input_dim)
    throw DataError("test data has " + std::to_string(test.dim()) +
                    " covariates, ensemble expects " + std::to_string(ensemble.spec.input_dim));
  for (auto m : methods) {
    if (m == IntervalMethod::QCI2 && !model.iterated)
      throw ConfigError("QCI2 requested but the ensemble has no iterated stage (fit with --iterated)");
    if (m == IntervalMethod::PI) throw ConfigError("PI is not a confidence interval method");
  }
  const std::size_t n = ensemble.plan.n;
  const KappaPair kappas = bounding_kappas(n, model.beta);
  const Eigen::MatrixXd members = predict_members_batch(ensemble, test.x);
  Eigen::MatrixXd inner;
  if (model.iterated) inner = iterated_means_batch(*model.iterated, test.x);

  std::vector<IntervalRecord> records;
  for (Index t = 0; t < test.size(); ++t) {
    const Eigen::VectorXd preds = members.col(t);
    const double mean = preds.mean();
    for (auto method : methods) {
      for (double delta : deltas) {
        IntervalResult ci;
        switch (method) {
          case IntervalMethod::QCI1: ci = qci1(preds, delta); break;
          case IntervalMethod::QCI2: ci = qci2_iterated(mean, inner.col(t), kappas, delta); break;
          case IntervalMethod::PCI1: ci = pci1(mean, preds, n, model.beta, delta); break;
          case IntervalMethod::PCI2:
          case IntervalMethod::PCI3:
            ci = pci_enlarged(mean, preds, test.y(t), n, model.beta, delta, method);
            break;
          case IntervalMethod::PI: break;
        }
        IntervalRecord rec{static_cast<std::size_t>(t), ci, std::nullopt, std::nullopt};
        if (targets) rec.target = (*targets)(t);
        records.push_back(rec);
      }
    }
  }
  return records;
}

std::vector<IntervalRecord> prediction_intervals(const FittedModel& model,
                                                 const ResidualDistribution& residuals,
                                                 const Dataset& test,
                                                 std::span<const double> deltas) {
  if (test.dim() != model.ensemble.spec.input_dim)
    throw DataError("test data dimension does not match the ensemble");
  const Eigen::VectorXd means = predict_mean_batch(model.ensemble, test.x);
  std::vector<IntervalRecord> records;
  for (Index t = 0; t < test.size(); ++t)
    for (double delta : deltas)
      records.push_back({static_cast<std::size_t>(t), prediction_interval(means(t), residuals, delta),
                         test.y(t), std::nullopt});
  return records;
}

std::vector<IntervalSummary> summarize_intervals(
    std::span<const std::vector<IntervalRecord>> replications) {
  struct Acc {
    std::map<std::size_t, std::pair<double, double>> per_point;  // coverage sum, length sum
    std::map<std::size_t, std::size_t> counts;
  };
  std::map<std::pair<int, double>, Acc> groups;
  for (const auto& rep : replications) {
    for (const auto& r : rep) {
      auto& acc = groups[{static_cast<int>(r.interval.method), r.interval.nominal_delta}];
      double hit = 0.0;
      if (r.conditional_coverage)
        hit = *r.conditional_coverage;
      else if (auto c = r.covered())
        hit = *c ? 1.0 : 0.0;
      auto& slot = acc.per_point[r.point_index];
      slot.first += hit;
      slot.second += r.interval.length();
      ++acc.counts[r.point_index];
    }
  }
  std::vector<IntervalSummary> out;
  for (const auto& [key, acc] : groups) {
    IntervalSummary s;
    s.method = static_cast<IntervalMethod>(key.first);
    s.delta = key.second;
    for (const auto& [point, sums] : acc.per_point) {
      const double count = static_cast<double>(acc.counts.at(point));
      s.ecr_per_point.push_back(sums.first / count);
      s.el_per_point.push_back(sums.second / count);
    }
    for (std::size_t i = 0; i < s.ecr_per_point.size(); ++i) {
      s.mean_ecr += s.ecr_per_point[i] / static_cast<double>(s.ecr_per_point.size());
      s.mean_el += s.el_per_point[i] / static_cast<double>(s.el_per_point.size());
    }
    out.push_back(std::move(s));
  }
  return out;
}

IntervalReplication run_ci_replication(const ExperimentConfig& cfg, std::size_t rep) {
  const ExperimentConfig rc = with_train_seed(cfg, replication_train_seed(cfg, rep));
  const Dataset data = generate(cfg.model, cfg.n, replication_data_seed(cfg, rep));
  const Dataset test = fixed_test_points(cfg.model, cfg.test_points);
  bool iterated = false;
  for (auto m : cfg.ci_methods) iterated = iterated || m == IntervalMethod::QCI2;

  IntervalReplication out;
  const FittedModel model = fit_model(rc, data, iterated);
  out.times.first_stage = model.ensemble.total_seconds;
  if (model.iterated) out.times.iterated_stage = model.iterated->total_seconds;
  const auto start = Clock::now();
  out.records = confidence_intervals(model, test, true_f_batch(cfg.model, test.x), cfg.ci_methods,
                                     cfg.deltas);
  out.times.intervals = seconds_since(start);
  return out;
}

IntervalReplication run_pi_replication(const ExperimentConfig& cfg, std::size_t rep) {
  const ExperimentConfig rc = with_train_seed(cfg, replication_train_seed(cfg, rep));
  const Dataset data = generate(cfg.model, cfg.n, replication_data_seed(cfg, rep));
  const Dataset test = fixed_test_points(cfg.model, cfg.test_points);

  IntervalReplication out;
  const FittedModel model = fit_model(rc, data, false);
  out.times.first_stage = model.ensemble.total_seconds;
  const auto start = Clock::now();
  const ResidualDistribution residuals = fit_residuals(model.ensemble, data);
  out.records = prediction_intervals(model, residuals, test, cfg.deltas);
  for (auto& r : out.records)
    r.conditional_coverage =
        conditional_pi_coverage(r.interval, cfg.model, test.x.col(static_cast<Index>(r.point_index)),
                                cfg.mc_draws, replication_mc_seed(cfg, rep, r.point_index));
  out.times.intervals = seconds_since(start);
  return out;
}

json to_json(const ExperimentConfig& cfg) {
  std::vector<std::string> methods, baselines;
  for (auto m : cfg.ci_methods) methods.push_back(to_string(m));
  for (auto b : cfg.baselines) baselines.push_back(to_string(b));
  return json{{"model", to_string(cfg.model.id)},
              {"noise", cfg.model.noise},
              {"n", cfg.n},
              {"beta", cfg.beta},
              {"overlap", cfg.overlap},
              {"depth", cfg.depth},
              {"widths", cfg.widths},
              {"iterated_widths", cfg.iterated_widths},
              {"epochs", cfg.train.epochs},
              {"batch_size", cfg.train.batch_size},
              {"learning_rate", cfg.train.learning_rate},
              {"adam_beta1", cfg.train.adam_beta1},
              {"adam_beta2", cfg.train.adam_beta2},
              {"adam_epsilon", cfg.train.adam_epsilon},
              {"deltas", cfg.deltas},
              {"ci_methods", methods},
              {"baselines", baselines},
              {"replications", cfg.replications},
              {"test_points", cfg.test_points},
              {"test_n", cfg.test_n},
              {"mc_draws", cfg.mc_draws},
              {"seed", cfg.seed},
              {"threads", cfg.threads}};
}

json to_json(const ErrorReport& r) {
  return json{{"mse1", r.mse1},   {"mse2", r.mse2},
              {"mspe1", r.mspe1}, {"mspe2", r.mspe2},
              {"sigma2_hat", r.sigma2_hat}, {"sigma2_hat_test", r.sigma2_hat_test}};
}

json to_json(const EstimatorResult& r) {
  return json{{"estimator", r.name},
              {"widths", r.spec.hidden_widths},
              {"param_count", param_count(r.spec)},
              {"errors", to_json(r.errors)},
              {"train_seconds", r.train_seconds}};
}

json to_json(const IntervalRecord& r) {
  json j{{"point_index", r.point_index},
         {"method", to_string(r.interval.method)},
         {"delta", r.interval.nominal_delta},
         {"lower", r.interval.lower},
         {"upper", r.interval.upper},
         {"covered", nullptr},
         {"length", r.interval.length()}};
  if (auto c = r.covered()) j["covered"] = *c;
  if (r.conditional_coverage) j["conditional_coverage"] = *r.conditional_coverage;
  return j;
}

json to_json(const IntervalSummary& s) {
  return json{{"method", to_string(s.method)}, {"delta", s.delta},
              {"mean_ecr", s.mean_ecr},        {"mean_el", s.mean_el},
              {"ecr_per_point", s.ecr_per_point}, {"el_per_point", s.el_per_point}};
}

json to_json(const CoverageReport& r) {
  return json{{"method", to_string(r.method)}, {"delta", r.delta}, {"ecr", r.ecr},
              {"el", r.el}, {"count", r.count}};
}

}  // namespace ssdnn
