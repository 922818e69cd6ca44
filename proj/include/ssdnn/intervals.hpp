#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssdnn/dataset.hpp"
#include "ssdnn/subagging.hpp"

namespace ssdnn {

enum class IntervalMethod { QCI1, QCI2, PCI1, PCI2, PCI3, PI };

std::string to_string(IntervalMethod method);
std::optional<IntervalMethod> parse_interval_method(std::string_view name);

/// Closed interval [lower, upper] at nominal level 1 - delta.
struct IntervalResult {
  double lower = 0.0;
  double upper = 0.0;
  IntervalMethod method = IntervalMethod::QCI1;
  double nominal_delta = 0.1;

  double length() const { return upper - lower; }
  bool contains(double value) const { return lower <= value && value <= upper; }
};

/// Normalizing rates for the iterated-subsampling interval.
struct KappaPair {
  double kappa_n = 1.0;
  double kappa_b = 1.0;
  double beta = 0.0;
};

/// Conservative rates for unknown variance order alpha: kappa_b at the
/// largest alpha (1/2), n^{beta/2}, and kappa_n at the smallest (1/4),
/// n^{(1 - beta/2)/2}.
KappaPair bounding_kappas(std::size_t n, double beta);

/// Rates for a known alpha: kappa_n = n^{(1-beta+2 alpha beta)/2},
/// kappa_b = kappa_n^beta.
KappaPair kappas_for_alpha(std::size_t n, double beta, double alpha);

/// Order-statistic quantile: the ceil(p*m)-th smallest value (1-based,
/// clamped to [1, m]). Input must be sorted ascending.
double empirical_quantile(std::span<const double> sorted_values, double p);

/// Equal-tail quantiles of the member predictions.
IntervalResult qci1(const Eigen::VectorXd& member_preds, double delta);

/// mean +- z_{1-delta/2} * sd(members) / n^{(1-beta)/2}.
IntervalResult pci1(double mean, const Eigen::VectorXd& member_preds, std::size_t n, double beta,
                    double delta);

/// pci1 with the margin enlarged by the squared gap between the estimate and
/// the observed response y_at_x. PCI2 divides that gap by n^{1-beta}, PCI3
/// by n.
IntervalResult pci_enlarged(double mean, const Eigen::VectorXd& member_preds, double y_at_x,
                            std::size_t n, double beta, double delta, IntervalMethod variant);

/// Interval from the iterated-subsampling distribution of
/// kappa_b (iterated_mean_i - mean): [mean - b_u/kappa_n, mean - b_l/kappa_n].
IntervalResult qci2_iterated(double mean, const Eigen::VectorXd& iterated_means,
                             const KappaPair& kappas, double delta);

/// Sorted fitted residuals y_i - fbar(x_i); not re-centered.
struct ResidualDistribution {
  std::vector<double> sorted_residuals;
  double mean = 0.0;

  std::size_t size() const { return sorted_residuals.size(); }
};

ResidualDistribution make_residual_distribution(std::vector<double> residuals);

ResidualDistribution fit_residuals(const SubaggingEnsemble& ensemble, const Dataset& data);

/// [mean + Q(delta/2), mean + Q(1 - delta/2)] of the residual distribution.
IntervalResult prediction_interval(double mean_at_x0, const ResidualDistribution& residuals,
                                   double delta);

}  // namespace ssdnn
