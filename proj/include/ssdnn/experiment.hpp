#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ssdnn/intervals.hpp"
#include "ssdnn/metrics.hpp"
#include "ssdnn/serialize.hpp"
#include "ssdnn/simulation.hpp"
#include "ssdnn/sizing.hpp"

namespace ssdnn {

/// Declarative description of a simulation study.
struct ExperimentConfig {
  SimModel model{SimModelId::M1, true};
  std::size_t n = 4000;
  double beta = 0.7;
  /// h = a * b. The experiments imply a = 1 (disjoint blocks: q = 38 at
  /// n = 200000, beta = 0.7).
  double overlap = 1.0;
  Index depth = 2;
  std::vector<Index> widths;           // empty: constant width, size <= b
  std::vector<Index> iterated_widths;  // empty: constant width, size <= b'
  TrainConfig train;
  std::vector<double> deltas{0.05, 0.10};
  std::vector<IntervalMethod> ci_methods{IntervalMethod::QCI1, IntervalMethod::QCI2,
                                         IntervalMethod::PCI1, IntervalMethod::PCI2,
                                         IntervalMethod::PCI3};
  std::vector<Baseline> baselines{std::begin(kAllBaselines), std::end(kAllBaselines)};
  std::size_t replications = 1;
  std::size_t test_points = 10;
  std::size_t test_n = 10000;  // held-out sample for MSPE
  std::size_t mc_draws = 3000;
  std::uint64_t seed = 1;
  unsigned threads = 0;

  void validate() const;
};

/// Member architecture: explicit widths, or depth-`depth` constant width
/// with param_count <= b.
NetworkSpec member_spec(const ExperimentConfig& cfg, Index input_dim, std::size_t b);
NetworkSpec iterated_member_spec(const ExperimentConfig& cfg, Index input_dim, std::size_t inner_b);

/// Seeds of replication k: data, training, held-out test set, Monte Carlo.
std::uint64_t replication_data_seed(const ExperimentConfig& cfg, std::size_t rep);
std::uint64_t replication_train_seed(const ExperimentConfig& cfg, std::size_t rep);
std::uint64_t replication_test_seed(const ExperimentConfig& cfg, std::size_t rep);
std::uint64_t replication_mc_seed(const ExperimentConfig& cfg, std::size_t rep, std::size_t point);

/// Fits SS-DNN (and optionally the iterated stage) on one data set.
FittedModel fit_model(const ExperimentConfig& cfg, const Dataset& data, bool with_iterated);

// --- point estimation -------------------------------------------------------

struct EstimatorResult {
  std::string name;
  NetworkSpec spec;
  ErrorReport errors;
  double train_seconds = 0.0;
};

/// f(x_i) for every training point: y - eps when eps is recorded, otherwise
/// the model's regression function.
Eigen::VectorXd true_values(const Dataset& data, const std::optional<SimModel>& model);

ErrorReport evaluate_errors(const Eigen::VectorXd& train_pred, const Dataset& train,
                            const Eigen::VectorXd& train_f, const Eigen::VectorXd& test_pred,
                            const Dataset& test, const Eigen::VectorXd& test_f);

/// SS-DNN followed by the configured whole-sample baselines, all on `train`
/// and scored on `train` and `test`.
std::vector<EstimatorResult> compare_estimators(const ExperimentConfig& cfg, const Dataset& train,
                                                const Eigen::VectorXd& train_f,
                                                const Dataset& test,
                                                const Eigen::VectorXd& test_f);

/// One replication of the point-estimation study on simulated data.
std::vector<EstimatorResult> run_point_replication(const ExperimentConfig& cfg, std::size_t rep);

/// Element-wise averages over replications (same estimator order in each).
std::vector<EstimatorResult> average_estimators(
    std::span<const std::vector<EstimatorResult>> replications);

// --- intervals ----------------------------------------------------------------

struct IntervalRecord {
  std::size_t point_index = 0;
  IntervalResult interval;
  std::optional<double> target;  // f(x) for CIs; absent when unknown
  std::optional<double> conditional_coverage;  // PI only

  std::optional<bool> covered() const;
};

/// Every requested CI method at every delta for each test point. QCI2 needs
/// the iterated stage and PCI2/PCI3 the observed response.
std::vector<IntervalRecord> confidence_intervals(const FittedModel& model, const Dataset& test,
                                                 const std::optional<Eigen::VectorXd>& targets,
                                                 std::span<const IntervalMethod> methods,
                                                 std::span<const double> deltas);

std::vector<IntervalRecord> prediction_intervals(const FittedModel& model,
                                                 const ResidualDistribution& residuals,
                                                 const Dataset& test,
                                                 std::span<const double> deltas);

/// Per (method, delta): coverage and length per test point, averaged over
/// replications, and their means over points.
struct IntervalSummary {
  IntervalMethod method = IntervalMethod::QCI1;
  double delta = 0.1;
  std::vector<double> ecr_per_point;
  std::vector<double> el_per_point;
  double mean_ecr = 0.0;
  double mean_el = 0.0;
};

std::vector<IntervalSummary> summarize_intervals(
    std::span<const std::vector<IntervalRecord>> replications);

struct PhaseTimes {
  double first_stage = 0.0;
  double iterated_stage = 0.0;
  double intervals = 0.0;
};

struct IntervalReplication {
  std::vector<IntervalRecord> records;
  PhaseTimes times;
};

/// Conditional CI study: fit on fresh data, intervals at the fixed test points.
IntervalReplication run_ci_replication(const ExperimentConfig& cfg, std::size_t rep);

/// Conditional PI study: fit, residual PI at the fixed test points, and
/// coverage of cfg.mc_draws fresh responses at each point.
IntervalReplication run_pi_replication(const ExperimentConfig& cfg, std::size_t rep);

// --- records ------------------------------------------------------------------

nlohmann::json to_json(const ExperimentConfig& cfg);
nlohmann::json to_json(const ErrorReport& report);
nlohmann::json to_json(const EstimatorResult& result);
nlohmann::json to_json(const IntervalRecord& record);
nlohmann::json to_json(const IntervalSummary& summary);
nlohmann::json to_json(const CoverageReport& report);

}  // namespace ssdnn
