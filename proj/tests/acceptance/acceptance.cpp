// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run everything
//   acceptance 1 4 7      run a subset (7 shares the run of 6)
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ssdnn/adam.hpp"
#include "ssdnn/bias.hpp"
#include "ssdnn/block_plan.hpp"
#include "ssdnn/experiment.hpp"
#include "ssdnn/intervals.hpp"
#include "ssdnn/network.hpp"
#include "ssdnn/random.hpp"

using namespace ssdnn;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const Outcome& o) {
  std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << title << " -- "
            << o.detail << std::endl;
  if (!o.pass) ++failures;
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

std::string sci(double v) {
  std::ostringstream s;
  s.precision(2);
  s << std::scientific << v;
  return s.str();
}

// 1 ---------------------------------------------------------------------------

Outcome arithmetic() {
  const auto start = Clock::now();
  const BlockPlan plan = plan_from_beta(200000, 0.7, 1.0);
  const BlockPlan inner = iterated_plan(plan, 0.7);
  const std::size_t w = param_count(NetworkSpec{2, {4, 4}, 1});
  const double ms = 1e3 * seconds_since(start);
  return {plan.q == 38 && inner.q == 12 && w == 37 && ms < 1.0,
          "q=" + std::to_string(plan.q) + " q'=" + std::to_string(inner.q) +
              " W=" + std::to_string(w) + " in " + fmt(ms, 3) + " ms"};
}

// 2 ---------------------------------------------------------------------------

Outcome gradients() {
  const auto start = Clock::now();
  Rng rng(99);
  std::size_t checked = 0, bad = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    NetworkSpec spec;
    spec.input_dim = 1 + static_cast<Index>(rng.below(5));
    const auto depth = 1 + rng.below(3);
    for (std::uint64_t l = 0; l < depth; ++l)
      spec.hidden_widths.push_back(1 + static_cast<Index>(rng.below(8)));
    spec.output_dim = 1;
    auto params = init_params(spec, rng.next());
    for (Index i = 0; i < params.size(); ++i) params.values()(i) += 0.1 * rng.normal();
    const auto m = static_cast<Index>(1 + rng.below(16));
    Eigen::MatrixXd x(spec.input_dim, m), y(1, m);
    for (Index j = 0; j < m; ++j) {
      for (Index i = 0; i < spec.input_dim; ++i) x(i, j) = rng.normal();
      y(0, j) = rng.normal();
    }
    const auto grad = backward(params, x, y);
    Network probe = params;
    const double h = 1e-5;
    for (Index i = 0; i < params.size(); ++i) {
      const double saved = probe.values()(i);
      probe.values()(i) = saved + h;
      const double up = mse_loss(probe, x, y);
      probe.values()(i) = saved - h;
      const double down = mse_loss(probe, x, y);
      probe.values()(i) = saved;
      const double numeric = (up - down) / (2 * h);
      const double err = std::abs(grad.values()(i) - numeric);
      const bool ok = err <= 1e-7 || err <= 1e-4 * std::abs(numeric);
      if (!ok) ++bad;
      worst = std::max(worst, err);
      ++checked;
    }
  }
  const double secs = seconds_since(start);
  return {bad == 0 && secs < 30.0,
          std::to_string(checked) + " entries, " + std::to_string(bad) +
              " outside tolerance, max abs error " + sci(worst) + ", " + fmt(secs, 2) + " s"};
}

// 3 ---------------------------------------------------------------------------

Outcome adam_oracle() {
  const NetworkSpec spec{1, {1}, 1};
  Network params(spec), grad(spec);
  AdamState<double> state(spec);
  TrainConfig cfg;
  grad.values()(0) = 1.0;
  adam_step(params, state, grad, cfg);
  const double one = params.values()(0);
  adam_step(params, state, grad, cfg);
  const double two = params.values()(0);
  const double e1 = std::abs(one - (-0.009999999900000002));
  const double e2 = std::abs(two - (-0.019999999799999932));
  return {e1 <= 1e-12 && e2 <= 1e-12, "step errors " + sci(e1) + ", " + sci(e2)};
}

// 4 ---------------------------------------------------------------------------

Outcome bias_round_trip() {
  double worst_fit = 0.0, worst_stub = 0.0;
  for (double c_b : {0.5, 2.0}) {
    for (double lambda : {0.5, 1.0, 1.5}) {
      const PowerLaw truth{lambda, c_b};
      const auto fit = solve_power_law(300, truth.at(300), 75, truth.at(75));
      worst_fit = std::max({worst_fit, std::abs(fit.lambda - lambda), std::abs(fit.c_b - c_b)});

      // Stub members at b1 = b/2 and b2 = b/4 deviating from the reference
      // by exactly the power-law bias, with spread that averages out.
      const std::size_t b = 1024, b1 = default_b1(b), b2 = default_b2(b);
      const double ref = 1.7;
      auto stub = [&](std::size_t bi, Index q) {
        Eigen::VectorXd v = Eigen::VectorXd::Constant(q, ref + truth.at(double(bi)));
        for (Index j = 0; j + 1 < q; j += 2) {
          v(j) += 0.25;
          v(j + 1) -= 0.25;
        }
        return v;
      };
      const auto est = scale_down_bias(b, ref, b1, stub(b1, 38), b2, stub(b2, 78));
      worst_stub = std::max(worst_stub, std::abs(est.bias_at_b - truth.at(double(b))));
    }
  }
  return {worst_fit <= 1e-10 && worst_stub <= 1e-10,
          "max (lambda, c_b) error " + sci(worst_fit) + ", max bias_at_b error " +
              sci(worst_stub)};
}

// 5 ---------------------------------------------------------------------------

bool contains(const IntervalResult& outer, const IntervalResult& inner) {
  const double tol = 1e-12 * (1.0 + std::abs(outer.lower) + std::abs(outer.upper));
  return outer.lower <= inner.lower + tol && inner.upper <= outer.upper + tol;
}

Outcome interval_algebra() {
  const auto start = Clock::now();
  Rng rng(5);
  std::size_t trials = 0, nest = 0, order = 0, shift = 0, stats = 0;
  for (int trial = 0; trial < 5000; ++trial, ++trials) {
    const Index q = 2 + static_cast<Index>(rng.below(80));
    const std::size_t n = 50 + rng.below(200000);
    const double beta = 0.2 + 0.7 * rng.uniform();
    const double center = 5.0 * rng.normal(), scale = 0.01 + 3.0 * rng.uniform();
    Eigen::VectorXd m(q), it(q);
    for (Index j = 0; j < q; ++j) {
      m(j) = center + scale * rng.normal();
      it(j) = center + scale * rng.normal();
    }
    const double mean = m.mean();
    const double y = mean + 2.0 * rng.normal();
    const KappaPair k = bounding_kappas(n, beta);
    auto all = [&](const Eigen::VectorXd& mm, const Eigen::VectorXd& ii, double mu, double yy,
                   double delta) {
      return std::vector<IntervalResult>{
          qci1(mm, delta), qci2_iterated(mu, ii, k, delta), pci1(mu, mm, n, beta, delta),
          pci_enlarged(mu, mm, yy, n, beta, delta, IntervalMethod::PCI2),
          pci_enlarged(mu, mm, yy, n, beta, delta, IntervalMethod::PCI3)};
    };
    const auto wide = all(m, it, mean, y, 0.05);
    const auto narrow = all(m, it, mean, y, 0.10);
    bool ok = true;
    for (std::size_t i = 0; i < wide.size(); ++i)
      ok = ok && wide[i].lower <= wide[i].upper && contains(wide[i], narrow[i]);
    if (!ok) ++nest;
    for (const auto& set : {wide, narrow})
      if (!contains(set[3], set[4]) || !contains(set[4], set[2])) ++order;

    const double t = 10.0 * rng.normal();
    const Eigen::VectorXd ms = m.array() + t, its = it.array() + t;
    const auto moved = all(ms, its, mean + t, y + t, 0.10);
    for (std::size_t i = 0; i < moved.size(); ++i) {
      const double tol = 1e-9 * (1.0 + std::abs(t) + std::abs(center) + scale);
      if (std::abs(moved[i].lower - (narrow[i].lower + t)) > tol ||
          std::abs(moved[i].upper - (narrow[i].upper + t)) > tol) {
        ++shift;
        break;
      }
    }
    const double* begin = m.data();
    const double* end = m.data() + q;
    if (std::find(begin, end, narrow[0].lower) == end || std::find(begin, end, narrow[0].upper) == end ||
        std::find(begin, end, wide[0].lower) == end || std::find(begin, end, wide[0].upper) == end)
      ++stats;
  }
  const double secs = seconds_since(start);
  const bool pass = nest == 0 && order == 0 && shift == 0 && stats == 0 && secs < 10.0;
  return {pass, std::to_string(trials) + " random cases; violations: nesting " +
                    std::to_string(nest) + ", PCI2>=PCI3>=PCI1 " + std::to_string(order) +
                    ", translation " + std::to_string(shift) + ", order statistics " +
                    std::to_string(stats) + "; " + fmt(secs, 2) + " s"};
}

// 6 and 7 -----------------------------------------------------------------------

struct PointStudy {
  std::vector<EstimatorResult> mean;
  double ss_seconds = 0.0;
  double s_seconds = 0.0;
  double wall = 0.0;
};

PointStudy run_point_study() {
  ExperimentConfig cfg;
  cfg.model = SimModel{SimModelId::M3, true};
  cfg.n = 4000;
  cfg.beta = 0.7;
  cfg.depth = 3;
  cfg.train.epochs = 100;
  cfg.baselines = {Baseline::SDnn};
  cfg.replications = 20;
  cfg.seed = 1;
  cfg.threads = 0;

  PointStudy study;
  const auto start = Clock::now();
  std::vector<std::vector<EstimatorResult>> reps;
  for (std::size_t k = 0; k < cfg.replications; ++k) {
    reps.push_back(run_point_replication(cfg, k));
    study.ss_seconds += reps.back()[0].train_seconds;
    study.s_seconds += reps.back()[1].train_seconds;
  }
  study.mean = average_estimators(reps);
  study.wall = seconds_since(start);
  return study;
}

Outcome mse_behaviour(const PointStudy& s) {
  const auto& ss = s.mean[0].errors;
  const auto& sd = s.mean[1].errors;
  const bool a = ss.mse1 >= ss.sigma2_hat - 0.05 && ss.mse1 <= ss.sigma2_hat + 0.15;
  const bool b = ss.mse2 < sd.mse2;
  return {a && b, "(a) " + std::string(a ? "ok" : "no") + ": SS-DNN MSE-1 " + fmt(ss.mse1) +
                      " vs sigma2_hat " + fmt(ss.sigma2_hat) + "; (b) " + (b ? "ok" : "no") +
                      ": MSE-2 SS-DNN " + fmt(ss.mse2) + " vs S-DNN " + fmt(sd.mse2) +
                      "; widths " + std::to_string(s.mean[0].spec.hidden_widths[0]) + "x" +
                      std::to_string(s.mean[0].spec.depth()) + "; " + fmt(s.wall, 1) + " s"};
}

Outcome timing_order(const PointStudy& s) {
  return {s.ss_seconds < s.s_seconds, "training wall-clock over 20 replications: SS-DNN " +
                                          fmt(s.ss_seconds, 3) + " s, S-DNN " +
                                          fmt(s.s_seconds, 3) + " s"};
}

// 8 ---------------------------------------------------------------------------

Outcome pi_calibration() {
  ExperimentConfig cfg;
  cfg.model = SimModel{SimModelId::M1, true};
  cfg.n = 10000;
  cfg.deltas = {0.10};
  cfg.replications = 20;
  cfg.mc_draws = 3000;
  cfg.test_points = 10;
  cfg.seed = 1;

  const auto start = Clock::now();
  std::vector<std::vector<IntervalRecord>> reps;
  for (std::size_t k = 0; k < cfg.replications; ++k)
    reps.push_back(run_pi_replication(cfg, k).records);
  const auto summary = summarize_intervals(reps).at(0);
  const double secs = seconds_since(start);
  const bool pass = summary.mean_ecr >= 0.85 && summary.mean_ecr <= 0.92 &&
                    summary.mean_el >= 3.1 && summary.mean_el <= 3.5;
  return {pass, "ECR " + fmt(summary.mean_ecr) + " (target [0.85, 0.92]), EL " +
                    fmt(summary.mean_el) + " (target [3.1, 3.5]); " + fmt(secs, 1) + " s"};
}

// 9 ---------------------------------------------------------------------------

Outcome qci_conservative() {
  ExperimentConfig cfg;
  cfg.model = SimModel{SimModelId::M1, true};
  cfg.n = 20000;
  cfg.deltas = {0.10};
  cfg.ci_methods = {IntervalMethod::QCI1, IntervalMethod::QCI2};
  cfg.replications = 20;
  cfg.seed = 1;

  const auto start = Clock::now();
  std::vector<std::vector<IntervalRecord>> reps;
  for (std::size_t k = 0; k < cfg.replications; ++k)
    reps.push_back(run_ci_replication(cfg, k).records);
  const auto summaries = summarize_intervals(reps);
  const double secs = seconds_since(start);
  const IntervalSummary* q1 = nullptr;
  const IntervalSummary* q2 = nullptr;
  for (const auto& s : summaries) {
    if (s.method == IntervalMethod::QCI1) q1 = &s;
    if (s.method == IntervalMethod::QCI2) q2 = &s;
  }
  const bool pass = q1->mean_ecr >= 0.98 && q1->mean_el > q2->mean_el;
  return {pass, "QCI1 ECR " + fmt(q1->mean_ecr) + ", EL " + fmt(q1->mean_el) + "; QCI2 ECR " +
                    fmt(q2->mean_ecr) + ", EL " + fmt(q2->mean_el) + "; " + fmt(secs, 1) + " s"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  auto want = [&](int id) { return wanted.empty() || wanted.count(id) > 0; };

  if (want(1)) report(1, "arithmetic reproduction", arithmetic());
  if (want(2)) report(2, "gradient suite", gradients());
  if (want(3)) report(3, "Adam oracle", adam_oracle());
  if (want(4)) report(4, "bias-order round trip", bias_round_trip());
  if (want(5)) report(5, "quantile and interval algebra", interval_algebra());
  if (want(6) || want(7)) {
    const PointStudy study = run_point_study();
    if (want(6)) report(6, "desk-scale MSE behaviour (Model 3, n=4000, K=20)", mse_behaviour(study));
    if (want(7)) report(7, "timing ordering SS-DNN < S-DNN", timing_order(study));
  }
  if (want(8)) report(8, "PI calibration (Model 1, n=10000, K=20)", pi_calibration());
  if (want(9)) report(9, "QCI-1 conservativeness (Model 1, n=20000, K=20)", qci_conservative());

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
