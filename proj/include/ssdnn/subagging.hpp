#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "ssdnn/adam.hpp"
#include "ssdnn/block_plan.hpp"
#include "ssdnn/dataset.hpp"
#include "ssdnn/network.hpp"

namespace ssdnn {

/// Seed stream for first-stage members; member j trains with
/// derive_seed(cfg.seed, kMemberStream, j).
inline constexpr std::uint64_t kMemberStream = 0x4d454d42;  // "MEMB"
/// Seed stream for second-stage ensembles; block i uses
/// derive_seed(cfg.seed, kIteratedStream, i) as its master seed.
inline constexpr std::uint64_t kIteratedStream = 0x49544552;  // "ITER"

/// q networks, member j trained only on block j of the plan. The subagging
/// estimate is the plain average of the members.
struct SubaggingEnsemble {
  BlockPlan plan;
  NetworkSpec spec;
  std::vector<Network> models;
  std::vector<std::uint64_t> seeds;
  std::vector<double> train_seconds;  // per member
  double total_seconds = 0.0;         // wall clock of the whole fit

  std::size_t size() const { return models.size(); }
};

/// Trains one member per block. threads = 0 uses the hardware concurrency;
/// results do not depend on it.
SubaggingEnsemble fit_subagging(const Dataset& data, const BlockPlan& plan,
                                const NetworkSpec& spec, const TrainConfig& cfg,
                                unsigned threads = 0);

/// Member predictions at one point, in block order.
Eigen::VectorXd predict_members(const SubaggingEnsemble& ensemble, const Eigen::VectorXd& x);

double predict_mean(const SubaggingEnsemble& ensemble, const Eigen::VectorXd& x);

/// Member predictions for many points: q x m for a d x m input.
Eigen::MatrixXd predict_members_batch(const SubaggingEnsemble& ensemble, const Eigen::MatrixXd& x);

/// Subagging estimate at every column of x.
Eigen::VectorXd predict_mean_batch(const SubaggingEnsemble& ensemble, const Eigen::MatrixXd& x);

/// Second stage of iterated subsampling: inside each first-stage block i a
/// full subagging ensemble over that block's points.
struct IteratedStage {
  double beta = 0.0;
  BlockPlan outer_plan;
  BlockPlan inner_plan;
  NetworkSpec inner_spec;
  std::vector<SubaggingEnsemble> blocks;
  double total_seconds = 0.0;

  std::size_t size() const { return blocks.size(); }
};

IteratedStage fit_iterated(const Dataset& data, const BlockPlan& plan,
                           const NetworkSpec& inner_spec, const TrainConfig& cfg, double beta,
                           unsigned threads = 0);

/// The q second-stage subagging means at x, one per first-stage block.
Eigen::VectorXd iterated_means(const IteratedStage& stage, const Eigen::VectorXd& x);

/// Second-stage means at every column of x: q x m.
Eigen::MatrixXd iterated_means_batch(const IteratedStage& stage, const Eigen::MatrixXd& x);

}  // namespace ssdnn
