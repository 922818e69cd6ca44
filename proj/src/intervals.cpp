#include "ssdnn/intervals.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "ssdnn/normal.hpp"

namespace ssdnn {
namespace {

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("interval: delta must lie in (0, 1)");
}

void check_members(const Eigen::VectorXd& values, const char* what) {
  if (values.size() < 2)
    throw ConfigError(std::string("interval: ") + what + " needs at least two values");
}

std::vector<double> sorted_copy(const Eigen::VectorXd& values) {
  std::vector<double> out(values.data(), values.data() + values.size());
  std::sort(out.begin(), out.end());
  return out;
}

// ceil(x), treating values within rounding noise of an integer as that integer
// (0.1 * 30 evaluates to 3.0000000000000004).
double stable_ceil(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(nearest))) return nearest;
  return std::ceil(x);
}

double spread(double mean, const Eigen::VectorXd& member_preds) {
  return (member_preds.array() - mean).square().mean();
}

IntervalResult symmetric(double center, double margin, IntervalMethod method, double delta) {
  return IntervalResult{center - margin, center + margin, method, delta};
}

}  // namespace

std::string to_string(IntervalMethod method) {
  switch (method) {
    case IntervalMethod::QCI1: return "QCI1";
    case IntervalMethod::QCI2: return "QCI2";
    case IntervalMethod::PCI1: return "PCI1";
    case IntervalMethod::PCI2: return "PCI2";
    case IntervalMethod::PCI3: return "PCI3";
    case IntervalMethod::PI: return "PI";
  }
  return "?";
}

std::optional<IntervalMethod> parse_interval_method(std::string_view name) {
  for (auto m : {IntervalMethod::QCI1, IntervalMethod::QCI2, IntervalMethod::PCI1,
                 IntervalMethod::PCI2, IntervalMethod::PCI3, IntervalMethod::PI})
    if (std::ranges::equal(to_string(m), name, [](char a, char b) {
          return a == std::toupper(static_cast<unsigned char>(b));
        }))
      return m;
  return std::nullopt;
}

KappaPair bounding_kappas(std::size_t n, double beta) {
  const double nd = static_cast<double>(n);
  return KappaPair{std::pow(nd, (1.0 - beta / 2.0) / 2.0), std::pow(nd, beta / 2.0), beta};
}

KappaPair kappas_for_alpha(std::size_t n, double beta, double alpha) {
  const double rate = (1.0 - beta + 2.0 * alpha * beta) / 2.0;
  const double nd = static_cast<double>(n);
  return KappaPair{std::pow(nd, rate), std::pow(nd, beta * rate), beta};
}

double empirical_quantile(std::span<const double> sorted_values, double p) {
  if (sorted_values.empty()) throw ConfigError("quantile: empty input");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("quantile: p must lie in [0, 1]");
  const auto m = static_cast<double>(sorted_values.size());
  const double rank = std::clamp(stable_ceil(p * m), 1.0, m);
  return sorted_values[static_cast<std::size_t>(rank) - 1];
}

IntervalResult qci1(const Eigen::VectorXd& member_preds, double delta) {
  check_delta(delta);
  check_members(member_preds, "QCI1");
  const auto sorted = sorted_copy(member_preds);
  return IntervalResult{empirical_quantile(sorted, delta / 2.0),
                        empirical_quantile(sorted, 1.0 - delta / 2.0), IntervalMethod::QCI1,
                        delta};
}

IntervalResult pci1(double mean, const Eigen::VectorXd& member_preds, std::size_t n, double beta,
                    double delta) {
  check_delta(delta);
  check_members(member_preds, "PCI1");
  const double m_sigma = std::sqrt(spread(mean, member_preds)) /
                         std::pow(static_cast<double>(n), (1.0 - beta) / 2.0);
  return symmetric(mean, normal_quantile(1.0 - delta / 2.0) * m_sigma, IntervalMethod::PCI1,
                   delta);
}

IntervalResult pci_enlarged(double mean, const Eigen::VectorXd& member_preds, double y_at_x,
                            std::size_t n, double beta, double delta, IntervalMethod variant) {
  check_delta(delta);
  check_members(member_preds, "PCI2/PCI3");
  double two_alpha;
  if (variant == IntervalMethod::PCI2)
    two_alpha = 0.0;
  else if (variant == IntervalMethod::PCI3)
    two_alpha = 1.0;
  else
    throw ConfigError("pci_enlarged: variant must be PCI2 or PCI3");
  const double nd = static_cast<double>(n);
  const double gap = mean - y_at_x;
  const double m_tilde = std::sqrt(spread(mean, member_preds) / std::pow(nd, 1.0 - beta) +
                                   gap * gap / std::pow(nd, 1.0 - beta + two_alpha * beta));
  return symmetric(mean, normal_quantile(1.0 - delta / 2.0) * m_tilde, variant, delta);
}

IntervalResult qci2_iterated(double mean, const Eigen::VectorXd& iterated_means,
                             const KappaPair& kappas, double delta) {
  check_delta(delta);
  check_members(iterated_means, "QCI2");
  if (!(kappas.kappa_n > 0) || !(kappas.kappa_b > 0))
    throw ConfigError("QCI2: normalizing rates must be positive");
  const Eigen::VectorXd roots = kappas.kappa_b * (iterated_means.array() - mean).matrix();
  const auto sorted = sorted_copy(roots);
  const double b_l = empirical_quantile(sorted, delta / 2.0);
  const double b_u = empirical_quantile(sorted, 1.0 - delta / 2.0);
  return IntervalResult{mean - b_u / kappas.kappa_n, mean - b_l / kappas.kappa_n,
                        IntervalMethod::QCI2, delta};
}

ResidualDistribution make_residual_distribution(std::vector<double> residuals) {
  if (residuals.empty()) throw ConfigError("residuals: empty input");
  ResidualDistribution dist;
  double sum = 0.0;
  for (double r : residuals) sum += r;
  dist.mean = sum / static_cast<double>(residuals.size());
  std::sort(residuals.begin(), residuals.end());
  dist.sorted_residuals = std::move(residuals);
  return dist;
}

ResidualDistribution fit_residuals(const SubaggingEnsemble& ensemble, const Dataset& data) {
  data.validate();
  if (data.size() == 0) throw DataError("residuals: empty data set");
  const Eigen::VectorXd fitted = predict_mean_batch(ensemble, data.x);
  const Eigen::VectorXd resid = data.y - fitted;
  return make_residual_distribution(std::vector<double>(resid.data(), resid.data() + resid.size()));
}

IntervalResult prediction_interval(double mean_at_x0, const ResidualDistribution& residuals,
                                   double delta) {
  check_delta(delta);
  const auto& r = residuals.sorted_residuals;
  return IntervalResult{mean_at_x0 + empirical_quantile(r, delta / 2.0),
                        mean_at_x0 + empirical_quantile(r, 1.0 - delta / 2.0),
                        IntervalMethod::PI, delta};
}

}  // namespace ssdnn
