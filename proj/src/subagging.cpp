#include "ssdnn/subagging.hpp"

#include <chrono>
#include <functional>
#include <string>

#include "ssdnn/parallel.hpp"
#include "ssdnn/train.hpp"

namespace ssdnn {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct MemberJob {
  const Dataset* data;
  IndexRange range;
  std::uint64_t seed;
};

void check_fit_inputs(const Dataset& data, const BlockPlan& plan, const NetworkSpec& spec) {
  data.validate();
  spec.validate();
  if (spec.output_dim != 1) throw ConfigError("subagging: members must have a single output");
  if (data.dim() != spec.input_dim)
    throw DataError("subagging: data has " + std::to_string(data.dim()) +
                    " covariates, network expects " + std::to_string(spec.input_dim));
  if (plan.q == 0 || static_cast<std::size_t>(data.size()) < plan.covered())
    throw DataError("subagging: plan covers " + std::to_string(plan.covered()) +
                    " points but the data has " + std::to_string(data.size()));
}

// Trains every job into models/seconds; failures carry the job's label.
void train_jobs(const std::vector<MemberJob>& jobs, const NetworkSpec& spec,
                const TrainConfig& cfg, unsigned threads, std::vector<Network>& models,
                std::vector<double>& seconds,
                const std::function<std::string(std::size_t)>& label) {
  models.assign(jobs.size(), Network{});
  seconds.assign(jobs.size(), 0.0);
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    const auto& job = jobs[i];
    const auto start = Clock::now();
    TrainConfig member_cfg = cfg;
    member_cfg.seed = job.seed;
    const auto first = static_cast<Index>(job.range.offset());
    const auto count = static_cast<Index>(job.range.size());
    try {
      models[i] = train(spec, job.data->x.middleCols(first, count),
                        job.data->y.segment(first, count).transpose(), member_cfg);
    } catch (const NumericalError& e) {
      throw NumericalError(label(i) + ": " + e.what());
    }
    seconds[i] = seconds_since(start);
  });
}

}  // namespace

SubaggingEnsemble fit_subagging(const Dataset& data, const BlockPlan& plan,
                                const NetworkSpec& spec, const TrainConfig& cfg,
                                unsigned threads) {
  check_fit_inputs(data, plan, spec);
  cfg.validate();
  const auto start = Clock::now();

  SubaggingEnsemble ensemble;
  ensemble.plan = plan;
  ensemble.spec = spec;
  std::vector<MemberJob> jobs;
  for (std::size_t j = 1; j <= plan.q; ++j) {
    const auto seed = derive_seed(cfg.seed, kMemberStream, j);
    jobs.push_back({&data, block_indices(plan, j), seed});
    ensemble.seeds.push_back(seed);
  }
  train_jobs(jobs, spec, cfg, threads, ensemble.models, ensemble.train_seconds,
             [](std::size_t i) { return "block " + std::to_string(i + 1); });
  ensemble.total_seconds = seconds_since(start);
  return ensemble;
}

Eigen::VectorXd predict_members(const SubaggingEnsemble& ensemble, const Eigen::VectorXd& x) {
  Eigen::VectorXd out(static_cast<Index>(ensemble.size()));
  for (std::size_t j = 0; j < ensemble.size(); ++j)
    out(static_cast<Index>(j)) = predict(ensemble.models[j], x);
  return out;
}

double predict_mean(const SubaggingEnsemble& ensemble, const Eigen::VectorXd& x) {
  return predict_members(ensemble, x).mean();
}

Eigen::MatrixXd predict_members_batch(const SubaggingEnsemble& ensemble,
                                      const Eigen::MatrixXd& x) {
  Eigen::MatrixXd out(static_cast<Index>(ensemble.size()), x.cols());
  for (std::size_t j = 0; j < ensemble.size(); ++j)
    out.row(static_cast<Index>(j)) = forward(ensemble.models[j], x);
  return out;
}

Eigen::VectorXd predict_mean_batch(const SubaggingEnsemble& ensemble, const Eigen::MatrixXd& x) {
  return predict_members_batch(ensemble, x).colwise().mean().transpose();
}

IteratedStage fit_iterated(const Dataset& data, const BlockPlan& plan,
                           const NetworkSpec& inner_spec, const TrainConfig& cfg, double beta,
                           unsigned threads) {
  check_fit_inputs(data, plan, inner_spec);
  cfg.validate();
  const auto start = Clock::now();

  IteratedStage stage;
  stage.beta = beta;
  stage.outer_plan = plan;
  stage.inner_plan = iterated_plan(plan, beta);
  stage.inner_spec = inner_spec;
  const BlockPlan& inner = stage.inner_plan;

  // Flatten all q * q' second-stage members into one job list.
  std::vector<MemberJob> jobs;
  for (std::size_t i = 1; i <= plan.q; ++i) {
    const IndexRange outer = block_indices(plan, i);
    const auto block_seed = derive_seed(cfg.seed, kIteratedStream, i);
    for (std::size_t j = 1; j <= inner.q; ++j) {
      const IndexRange local = block_indices(inner, j);
      const IndexRange global{outer.first + local.first - 1, outer.first + local.last - 1};
      jobs.push_back({&data, global, derive_seed(block_seed, kMemberStream, j)});
    }
  }

  std::vector<Network> models;
  std::vector<double> seconds;
  train_jobs(jobs, inner_spec, cfg, threads, models, seconds, [&](std::size_t k) {
    return "block " + std::to_string(k / inner.q + 1) + " sub-block " +
           std::to_string(k % inner.q + 1);
  });

  for (std::size_t i = 0; i < plan.q; ++i) {
    SubaggingEnsemble block;
    block.plan = inner;
    block.spec = inner_spec;
    for (std::size_t j = 0; j < inner.q; ++j) {
      const std::size_t k = i * inner.q + j;
      block.models.push_back(std::move(models[k]));
      block.seeds.push_back(jobs[k].seed);
      block.train_seconds.push_back(seconds[k]);
      block.total_seconds += seconds[k];
    }
    stage.blocks.push_back(std::move(block));
  }
  stage.total_seconds = seconds_since(start);
  return stage;
}

Eigen::VectorXd iterated_means(const IteratedStage& stage, const Eigen::VectorXd& x) {
  Eigen::VectorXd out(static_cast<Index>(stage.size()));
  for (std::size_t i = 0; i < stage.size(); ++i)
    out(static_cast<Index>(i)) = predict_mean(stage.blocks[i], x);
  return out;
}

Eigen::MatrixXd iterated_means_batch(const IteratedStage& stage, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd out(static_cast<Index>(stage.size()), x.cols());
  for (std::size_t i = 0; i < stage.size(); ++i)
    out.row(static_cast<Index>(i)) = predict_mean_batch(stage.blocks[i], x).transpose();
  return out;
}

}  // namespace ssdnn
