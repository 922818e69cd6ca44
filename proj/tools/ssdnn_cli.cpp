// Command-line harness: simulate data, fit ensembles, build intervals,
// estimate bias and compare against whole-sample networks.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ssdnn/bias.hpp"
#include "ssdnn/csv.hpp"
#include "ssdnn/experiment.hpp"
#include "ssdnn/serialize.hpp"

using nlohmann::json;
using namespace ssdnn;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

struct Options {
  std::string model = "M1";
  bool noise_free = false;
  std::size_t n = 4000;
  double beta = 0.7;
  double overlap = 1.0;
  Index depth = 2;
  std::vector<Index> widths;
  std::vector<Index> iterated_widths;
  std::size_t epochs = 200;
  std::size_t batch_size = 10;
  double learning_rate = 0.01;
  std::vector<double> deltas{0.05, 0.10};
  std::vector<std::string> methods{"QCI1", "QCI2", "PCI1", "PCI2", "PCI3"};
  std::vector<std::string> baselines{"S-DNN", "DNN-deep-1", "DNN-deep-2", "DNN-wide-1",
                                     "DNN-wide-2"};
  std::size_t replications = 1;
  std::size_t test_points = 10;
  std::size_t test_n = 10000;
  std::size_t mc_draws = 3000;
  std::uint64_t seed = 1;
  unsigned threads = 0;

  std::string data;
  std::string test;
  std::string ensemble;
  std::string out;
  std::vector<double> x;
  bool iterated = false;
  bool fixed_test = false;
  bool conditional = false;
  bool members = false;
  std::size_t b1 = 0;
  std::size_t b2 = 0;
  std::size_t b = 0;
  std::vector<double> synthetic;
  std::string study = "ci";
  bool table = false;
};

SimModel sim_model(const Options& o) {
  const auto id = parse_model_id(o.model);
  if (!id) throw ConfigError("unknown model '" + o.model + "' (expected M1, M2, M3 or M4)");
  return SimModel{*id, !o.noise_free};
}

Baseline parse_baseline(const std::string& name) {
  for (auto b : kAllBaselines)
    if (to_string(b) == name) return b;
  throw ConfigError("unknown baseline '" + name + "'");
}

ExperimentConfig experiment_config(const Options& o) {
  ExperimentConfig cfg;
  cfg.model = sim_model(o);
  cfg.n = o.n;
  cfg.beta = o.beta;
  cfg.overlap = o.overlap;
  cfg.depth = o.depth;
  cfg.widths = o.widths;
  cfg.iterated_widths = o.iterated_widths;
  cfg.train.epochs = o.epochs;
  cfg.train.batch_size = o.batch_size;
  cfg.train.learning_rate = o.learning_rate;
  cfg.train.seed = o.seed;
  cfg.deltas = o.deltas;
  cfg.ci_methods.clear();
  for (const auto& m : o.methods) {
    const auto parsed = parse_interval_method(m);
    if (!parsed || *parsed == IntervalMethod::PI)
      throw ConfigError("unknown confidence interval method '" + m + "'");
    cfg.ci_methods.push_back(*parsed);
  }
  cfg.baselines.clear();
  for (const auto& b : o.baselines) cfg.baselines.push_back(parse_baseline(b));
  cfg.replications = o.replications;
  cfg.test_points = o.test_points;
  cfg.test_n = o.test_n;
  cfg.mc_draws = o.mc_draws;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  cfg.validate();
  return cfg;
}

std::string require(const std::string& value, const char* flag) {
  if (value.empty()) throw ConfigError(std::string("missing required option ") + flag);
  return value;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw DataError("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void line(const json& j) { stream() << j.dump() << '\n'; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

/// Aligned text table; first column left-aligned, the rest right-aligned.
void print_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  auto emit = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c == 0)
        out << std::left << std::setw(static_cast<int>(width[c])) << r[c];
      else
        out << "  " << std::right << std::setw(static_cast<int>(width[c])) << r[c];
    }
    out << '\n';
  };
  emit(header);
  std::size_t total = 0;
  for (auto w : width) total += w + 2;
  out << std::string(total - 2, '-') << '\n';
  for (const auto& r : rows) emit(r);
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

Eigen::VectorXd point_arg(const Options& o, Index dim) {
  if (o.x.empty()) throw ConfigError("missing required option --x");
  if (static_cast<Index>(o.x.size()) != dim)
    throw DataError("--x has " + std::to_string(o.x.size()) + " coordinates, expected " +
                    std::to_string(dim));
  return Eigen::Map<const Eigen::VectorXd>(o.x.data(), dim);
}

void print_summaries(const Options& o, Output& out, const std::vector<IntervalSummary>& summaries) {
  if (o.table) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : summaries)
      rows.push_back({to_string(s.method), fixed(s.delta, 2), fixed(s.mean_ecr, 3),
                      fixed(s.mean_el, 4)});
    print_table(out.stream(), {"method", "delta", "ECR", "EL"}, rows);
    return;
  }
  for (const auto& s : summaries) {
    json j = to_json(s);
    j["record"] = "summary";
    out.line(j);
  }
}

// --- subcommands --------------------------------------------------------------

int cmd_simulate(const Options& o) {
  const SimModel model = sim_model(o);
  const Dataset data =
      o.fixed_test ? fixed_test_points(model, o.test_points, o.seed) : generate(model, o.n, o.seed);
  if (o.out.empty())
    write_csv(std::cout, data);
  else
    write_csv(o.out, data);
  return kOk;
}

int cmd_fit(const Options& o) {
  ExperimentConfig cfg = experiment_config(o);
  const Dataset data = read_csv(require(o.data, "--data"));
  cfg.n = static_cast<std::size_t>(data.size());
  const FittedModel model = fit_model(cfg, data, o.iterated);
  save_model(require(o.ensemble, "--ensemble"), model);

  const Eigen::VectorXd preds = predict_mean_batch(model.ensemble, data.x);
  json rec{{"record", "fit"},
           {"config", to_json(cfg)},
           {"plan", to_json(model.ensemble.plan)},
           {"spec", to_json(model.ensemble.spec)},
           {"param_count", param_count(model.ensemble.spec)},
           {"seeds", model.ensemble.seeds},
           {"mse1", (preds - data.y).squaredNorm() / static_cast<double>(data.size())},
           {"times", {{"first_stage", model.ensemble.total_seconds},
                      {"member_train", model.ensemble.train_seconds}}}};
  if (data.eps) {
    const Eigen::VectorXd f = data.y - *data.eps;
    rec["mse2"] = (preds - f).squaredNorm() / static_cast<double>(data.size());
    rec["sigma2_hat"] = error_variance(*data.eps);
  }
  if (model.iterated) {
    rec["iterated_plan"] = to_json(model.iterated->inner_plan);
    rec["iterated_spec"] = to_json(model.iterated->inner_spec);
    rec["times"]["iterated_stage"] = model.iterated->total_seconds;
  }
  Output out(o.out);
  out.line(rec);
  return kOk;
}

int cmd_predict(const Options& o) {
  const FittedModel model = load_model(require(o.ensemble, "--ensemble"));
  const Index d = model.ensemble.spec.input_dim;
  Eigen::MatrixXd points;
  if (!o.data.empty()) {
    const Dataset data = read_csv(o.data);
    if (data.dim() != d)
      throw DataError(o.data + " has " + std::to_string(data.dim()) +
                      " covariates, ensemble expects " + std::to_string(d));
    points = data.x;
  } else {
    points = point_arg(o, d);
  }
  const Eigen::MatrixXd members = predict_members_batch(model.ensemble, points);
  Output out(o.out);
  for (Index t = 0; t < points.cols(); ++t) {
    json rec{{"point_index", t}, {"prediction", members.col(t).mean()}};
    if (o.members) rec["members"] = std::vector<double>(members.col(t).data(),
                                                        members.col(t).data() + members.rows());
    out.line(rec);
  }
  return kOk;
}

std::vector<CoverageReport> coverage_reports(const std::vector<IntervalRecord>& records) {
  std::map<std::pair<int, double>, std::pair<std::vector<IntervalResult>, std::vector<double>>> groups;
  for (const auto& r : records) {
    if (!r.target) continue;
    auto& g = groups[{static_cast<int>(r.interval.method), r.interval.nominal_delta}];
    g.first.push_back(r.interval);
    g.second.push_back(*r.target);
  }
  std::vector<CoverageReport> reports;
  for (const auto& [key, g] : groups) reports.push_back(coverage(g.first, g.second));
  return reports;
}

void print_interval_records(const Options& o, Output& out,
                            const std::vector<IntervalRecord>& records) {
  const auto reports = coverage_reports(records);
  if (o.table) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : reports)
      rows.push_back({to_string(r.method), fixed(r.delta, 2), fixed(r.ecr, 3), fixed(r.el, 4),
                      std::to_string(r.count)});
    print_table(out.stream(), {"method", "delta", "ECR", "EL", "points"}, rows);
    return;
  }
  for (const auto& r : records) out.line(to_json(r));
  for (const auto& r : reports) {
    json j = to_json(r);
    j["record"] = "coverage";
    out.line(j);
  }
}

int cmd_ci(const Options& o) {
  const ExperimentConfig cfg = experiment_config(o);
  const FittedModel model = load_model(require(o.ensemble, "--ensemble"));
  const Dataset test = read_csv(require(o.test, "--test"));
  std::optional<Eigen::VectorXd> targets;
  if (test.eps) targets = Eigen::VectorXd(test.y - *test.eps);
  const auto records = confidence_intervals(model, test, targets, cfg.ci_methods, cfg.deltas);
  Output out(o.out);
  print_interval_records(o, out, records);
  return kOk;
}

int cmd_pi(const Options& o) {
  const ExperimentConfig cfg = experiment_config(o);
  const FittedModel model = load_model(require(o.ensemble, "--ensemble"));
  const Dataset train = read_csv(require(o.data, "--data"));
  const Dataset test = read_csv(require(o.test, "--test"));
  if (static_cast<std::size_t>(train.size()) != model.ensemble.plan.n)
    throw DataError(o.data + " has " + std::to_string(train.size()) +
                    " rows but the ensemble was fitted on " +
                    std::to_string(model.ensemble.plan.n));
  const ResidualDistribution residuals = fit_residuals(model.ensemble, train);
  auto records = prediction_intervals(model, residuals, test, cfg.deltas);
  if (o.conditional) {
    if (test.dim() != cfg.model.input_dim())
      throw DataError("test points do not match model " + to_string(cfg.model.id));
    for (auto& r : records)
      r.conditional_coverage = conditional_pi_coverage(
          r.interval, cfg.model, test.x.col(static_cast<Index>(r.point_index)), cfg.mc_draws,
          replication_mc_seed(cfg, 0, r.point_index));
  }
  Output out(o.out);
  if (!o.table)
    out.line(json{{"record", "residuals"},
                  {"count", residuals.size()},
                  {"mean", residuals.mean}});
  if (o.conditional) {
    std::vector<std::vector<IntervalRecord>> one{records};
    if (!o.table)
      for (const auto& r : records) out.line(to_json(r));
    print_summaries(o, out, summarize_intervals(one));
    return kOk;
  }
  print_interval_records(o, out, records);
  return kOk;
}

json bias_record(const BiasEstimate& est) {
  return json{{"lambda_hat", est.lambda_hat}, {"c_b_hat", est.c_b_hat},
              {"b1_hat", est.b1_hat},         {"b2_hat", est.b2_hat},
              {"bias_at_b", est.bias_at_b},   {"b", est.b},
              {"b1", est.b1},                 {"b2", est.b2}};
}

int cmd_bias(const Options& o) {
  const ExperimentConfig cfg = experiment_config(o);
  Output out(o.out);
  if (!o.synthetic.empty()) {
    if (o.synthetic.size() != 2) throw ConfigError("--synthetic expects c_b,lambda");
    const PowerLaw truth{o.synthetic[1], o.synthetic[0]};
    const std::size_t b = o.b ? o.b : plan_from_beta(cfg.n, cfg.beta, cfg.overlap).b;
    const std::size_t b1 = o.b1 ? o.b1 : default_b1(b);
    const std::size_t b2 = o.b2 ? o.b2 : default_b2(b);
    // Stub members: every small-sample model deviates from the reference by
    // exactly the power-law bias at its block size.
    const double ref = 0.0;
    auto stub = [&](std::size_t bi) {
      const std::size_t qi = std::max<std::size_t>(2, make_plan(cfg.n, bi, bi).q);
      return Eigen::VectorXd::Constant(static_cast<Index>(qi),
                                       ref + truth.at(static_cast<double>(bi)))
          .eval();
    };
    json rec = bias_record(scale_down_bias(b, ref, b1, stub(b1), b2, stub(b2)));
    rec["synthetic"] = {{"c_b", truth.c_b}, {"lambda", truth.lambda},
                        {"bias_at_b", truth.at(static_cast<double>(b))}};
    out.line(rec);
    return kOk;
  }
  const Dataset data = read_csv(require(o.data, "--data"));
  const auto n = static_cast<std::size_t>(data.size());
  const BlockPlan plan = plan_from_beta(n, cfg.beta, cfg.overlap);
  SubaggingEnsemble ensemble;
  if (!o.ensemble.empty()) {
    ensemble = load_model(o.ensemble).ensemble;
    if (ensemble.plan.n != n) throw DataError("ensemble was fitted on a different sample size");
  } else {
    ensemble = fit_subagging(data, plan, member_spec(cfg, data.dim(), plan.b), cfg.train,
                             cfg.threads);
  }
  const Eigen::VectorXd x = point_arg(o, data.dim());
  const std::size_t b = ensemble.plan.b;
  const std::size_t b1 = o.b1 ? o.b1 : default_b1(b);
  const std::size_t b2 = o.b2 ? o.b2 : default_b2(b);
  out.line(bias_record(estimate_bias(data, ensemble, cfg.train, x, b1, b2, cfg.threads)));
  return kOk;
}

void print_estimators(const Options& o, Output& out, const std::vector<EstimatorResult>& results) {
  if (!o.table) {
    for (const auto& r : results) {
      json j = to_json(r);
      j["record"] = "estimator";
      out.line(j);
    }
    return;
  }
  std::vector<std::string> header{""};
  for (const auto& r : results) header.push_back(r.name);
  std::vector<std::vector<std::string>> rows;
  auto row = [&](const std::string& label, auto field, int digits) {
    std::vector<std::string> cells{label};
    for (const auto& r : results) cells.push_back(fixed(field(r), digits));
    rows.push_back(cells);
  };
  row("MSE-1", [](const EstimatorResult& r) { return r.errors.mse1; }, 4);
  row("MSE-2", [](const EstimatorResult& r) { return r.errors.mse2; }, 4);
  row("MSPE-1", [](const EstimatorResult& r) { return r.errors.mspe1; }, 4);
  row("MSPE-2", [](const EstimatorResult& r) { return r.errors.mspe2; }, 4);
  row("Params", [](const EstimatorResult& r) { return double(param_count(r.spec)); }, 0);
  row("Training time (s)", [](const EstimatorResult& r) { return r.train_seconds; }, 3);
  print_table(out.stream(), header, rows);
  out.stream() << "sigma2_hat = " << fixed(results.front().errors.sigma2_hat)
               << ", sigma2_hat_test = " << fixed(results.front().errors.sigma2_hat_test) << '\n';
}

int cmd_bench(const Options& o) {
  ExperimentConfig cfg = experiment_config(o);
  Output out(o.out);
  if (o.data.empty()) {
    std::vector<std::vector<EstimatorResult>> reps;
    for (std::size_t k = 0; k < cfg.replications; ++k) reps.push_back(run_point_replication(cfg, k));
    print_estimators(o, out, average_estimators(reps));
    return kOk;
  }
  const Dataset train = read_csv(o.data);
  cfg.n = static_cast<std::size_t>(train.size());
  const Dataset test =
      o.test.empty() ? generate(cfg.model, cfg.test_n, replication_test_seed(cfg, 0)) : read_csv(o.test);
  if (test.dim() != train.dim()) throw DataError("training and test data differ in dimension");
  // Without an eps column the true regression values come from --model.
  auto truth = [&](const Dataset& d) {
    return true_values(d, d.eps ? std::nullopt : std::optional<SimModel>(cfg.model));
  };
  print_estimators(o, out, compare_estimators(cfg, train, truth(train), test, truth(test)));
  return kOk;
}

int cmd_replicate(const Options& o) {
  const ExperimentConfig cfg = experiment_config(o);
  Output out(o.out);
  if (o.study == "point") {
    std::vector<std::vector<EstimatorResult>> reps;
    for (std::size_t k = 0; k < cfg.replications; ++k) reps.push_back(run_point_replication(cfg, k));
    print_estimators(o, out, average_estimators(reps));
    return kOk;
  }
  if (o.study != "ci" && o.study != "pi")
    throw ConfigError("--study must be ci, pi or point");
  std::vector<std::vector<IntervalRecord>> reps;
  for (std::size_t k = 0; k < cfg.replications; ++k) {
    auto rep = o.study == "ci" ? run_ci_replication(cfg, k) : run_pi_replication(cfg, k);
    if (!o.table)
      out.line(json{{"record", "replication"},
                    {"replication", k},
                    {"times", {{"first_stage", rep.times.first_stage},
                               {"iterated_stage", rep.times.iterated_stage},
                               {"intervals", rep.times.intervals}}}});
    reps.push_back(std::move(rep.records));
  }
  print_summaries(o, out, summarize_intervals(reps));
  return kOk;
}

void add_options(CLI::App& app, Options& o) {
  app.set_config("--config", "", "flat key = value configuration file; flags override it");
  app.add_option("--model", o.model, "simulation model M1..M4")->capture_default_str();
  app.add_flag("--noise-free", o.noise_free, "drop the error term");
  app.add_option("--n", o.n, "sample size for simulated data")->capture_default_str();
  app.add_option("--beta", o.beta, "block size exponent, b = floor(n^beta)")->capture_default_str();
  app.add_option("--overlap", o.overlap, "stride factor a, h = floor(a b)")->capture_default_str();
  app.add_option("--depth", o.depth, "hidden layers for auto-sized networks")->capture_default_str();
  app.add_option("--widths", o.widths, "explicit member hidden widths")->delimiter(',');
  app.add_option("--iterated-widths", o.iterated_widths, "explicit second-stage widths")
      ->delimiter(',');
  app.add_option("--epochs", o.epochs)->capture_default_str();
  app.add_option("--batch-size", o.batch_size)->capture_default_str();
  app.add_option("--learning-rate", o.learning_rate)->capture_default_str();
  app.add_option("--deltas", o.deltas, "nominal levels")->delimiter(',')->capture_default_str();
  app.add_option("--methods", o.methods, "CI methods")->delimiter(',')->capture_default_str();
  app.add_option("--baselines", o.baselines, "whole-sample comparison networks")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--replications", o.replications)->capture_default_str();
  app.add_option("--test-points", o.test_points)->capture_default_str();
  app.add_option("--test-n", o.test_n, "held-out sample size for MSPE")->capture_default_str();
  app.add_option("--mc-draws", o.mc_draws, "fresh responses per point for PI coverage")
      ->capture_default_str();
  app.add_option("--seed", o.seed, "master seed")->capture_default_str();
  app.add_option("--threads", o.threads, "worker threads, 0 = all cores")->capture_default_str();

  app.add_option("--data", o.data, "training data CSV");
  app.add_option("--test", o.test, "test data CSV");
  app.add_option("--ensemble", o.ensemble, "fitted ensemble JSON file");
  app.add_option("--out", o.out, "output path (default stdout)");
  app.add_option("--x", o.x, "evaluation point")->delimiter(',');
  app.add_flag("--iterated", o.iterated, "also fit the second stage (needed for QCI2)");
  app.add_flag("--fixed-test", o.fixed_test, "simulate: write the fixed test points");
  app.add_flag("--conditional", o.conditional, "pi: Monte Carlo conditional coverage");
  app.add_flag("--members", o.members, "predict: include member predictions");
  app.add_option("--b1", o.b1, "bias: first small block size (default b/2)");
  app.add_option("--b2", o.b2, "bias: second small block size (default b/4)");
  app.add_option("--b", o.b, "bias: block size in synthetic mode");
  app.add_option("--synthetic", o.synthetic, "bias: stub members with bias c_b b^(-lambda/2)")
      ->delimiter(',');
  app.add_option("--study", o.study, "replicate: ci, pi or point")->capture_default_str();
  app.add_flag("--table", o.table, "aligned text table instead of JSON lines");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subagged neural network regression with confidence and prediction intervals"};
  app.require_subcommand(1);
  Options o;
  add_options(app, o);

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Command commands[] = {
      {"simulate", "write a simulated data set as CSV", cmd_simulate},
      {"fit", "train the subagging ensemble and save it", cmd_fit},
      {"predict", "subagging predictions from a saved ensemble", cmd_predict},
      {"ci", "confidence intervals at test points", cmd_ci},
      {"pi", "residual prediction intervals at test points", cmd_pi},
      {"bias", "scaling-down bias estimate at a point", cmd_bias},
      {"bench", "SS-DNN against the whole-sample networks", cmd_bench},
      {"replicate", "repeat a simulation study and summarize", cmd_replicate},
  };
  for (const auto& c : commands) app.add_subcommand(c.name, c.help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    for (const auto& c : commands)
      if (app.got_subcommand(c.name)) return c.run(o);
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
