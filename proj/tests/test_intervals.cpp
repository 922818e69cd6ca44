#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ssdnn/intervals.hpp"
#include "ssdnn/normal.hpp"
#include "ssdnn/random.hpp"

using namespace ssdnn;

namespace {

bool contains(const IntervalResult& outer, const IntervalResult& inner, double tol = 1e-12) {
  return outer.lower <= inner.lower + tol && inner.upper <= outer.upper + tol;
}

Eigen::VectorXd random_members(Rng& rng, Index q) {
  Eigen::VectorXd v(q);
  const double center = 4.0 * rng.normal();
  const double scale = 0.01 + 2.0 * rng.uniform();
  for (Index j = 0; j < q; ++j) v(j) = center + scale * rng.normal();
  return v;
}

}  // namespace

TEST_CASE("normal quantile reference values") {
  CHECK(std::abs(normal_quantile(0.975) - 1.959963984540054) < 1e-14);
  CHECK(std::abs(normal_quantile(0.95) - 1.6448536269514722) < 1e-14);
  CHECK(std::abs(normal_quantile(0.995) - 2.5758293035489004) < 1e-14);
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(std::abs(normal_quantile(1e-10) + 6.361340902404056) < 1e-10);
  for (double p : {0.001, 0.2, 0.6, 0.9999})
    CHECK(std::abs(normal_cdf(normal_quantile(p)) - p) < 1e-13);
  CHECK_THROWS(normal_quantile(0.0));
  CHECK_THROWS(normal_quantile(1.0));
}

TEST_CASE("empirical quantile convention") {
  const std::vector<double> four{1, 2, 3, 4};
  CHECK(empirical_quantile(four, 0.5) == 2);
  CHECK(empirical_quantile(four, 0.0) == 1);
  CHECK(empirical_quantile(four, 1.0) == 4);
  const std::vector<double> one{5};
  CHECK(empirical_quantile(one, 0.3) == 5);
  std::vector<double> hundred(100);
  for (int i = 0; i < 100; ++i) hundred[i] = i + 1;
  CHECK(empirical_quantile(hundred, 0.975) == 98);
  std::vector<double> thirty(30);
  for (int i = 0; i < 30; ++i) thirty[i] = i + 1;
  CHECK(empirical_quantile(thirty, 0.1) == 3);
  CHECK_THROWS(empirical_quantile(std::vector<double>{}, 0.5));
}

TEST_CASE("qci1 examples") {
  const auto flat = qci1(Eigen::VectorXd::Constant(5, 2.0), 0.1);
  CHECK(flat.lower == 2.0);
  CHECK(flat.upper == 2.0);
  CHECK(flat.method == IntervalMethod::QCI1);
  const auto ci = qci1(Eigen::VectorXd::LinSpaced(38, 1, 38), 0.1);
  CHECK(ci.lower == 2);
  CHECK(ci.upper == 37);
  CHECK_THROWS_AS(qci1(Eigen::VectorXd::Constant(1, 2.0), 0.1), ConfigError);
}

TEST_CASE("pci examples") {
  const Eigen::Vector2d members(0.0, 2.0);
  const auto p1 = pci1(1.0, members, 100, 0.5, 0.05);
  CHECK(std::abs(p1.lower - 0.38020496769543843) < 1e-12);
  CHECK(std::abs(p1.upper - 1.6197950323045616) < 1e-12);

  const auto p2 = pci_enlarged(1.0, members, 2.0, 100, 0.5, 0.05, IntervalMethod::PCI2);
  CHECK(std::abs(p2.lower - 0.12347745942341848) < 1e-12);
  CHECK(std::abs(p2.upper - 1.8765225405765815) < 1e-12);
  CHECK(p2.method == IntervalMethod::PCI2);

  const auto p3 = pci_enlarged(1.0, members, 2.0, 100, 0.5, 0.05, IntervalMethod::PCI3);
  CHECK(std::abs(p3.lower - 0.3499534860670709) < 1e-12);
  CHECK(std::abs(p3.upper - 1.6500465139329292) < 1e-12);

  const auto same = pci_enlarged(1.0, members, 1.0, 100, 0.5, 0.05, IntervalMethod::PCI2);
  CHECK(same.lower == p1.lower);
  CHECK(same.upper == p1.upper);

  const auto zero = pci1(3.0, Eigen::VectorXd::Constant(4, 3.0), 100, 0.5, 0.05);
  CHECK(zero.lower == 3.0);
  CHECK(zero.upper == 3.0);
  CHECK_THROWS_AS(pci_enlarged(1.0, members, 2.0, 100, 0.5, 0.05, IntervalMethod::QCI1),
                  ConfigError);
}

TEST_CASE("qci2 examples") {
  KappaPair k{10.0, 1.0, 0.5};
  const auto sym = qci2_iterated(3.0, Eigen::Vector2d(2.0, 4.0), k, 0.1);
  CHECK(sym.lower == doctest::Approx(2.9));
  CHECK(sym.upper == doctest::Approx(3.1));
  CHECK(sym.method == IntervalMethod::QCI2);
  const auto flat = qci2_iterated(3.0, Eigen::VectorXd::Constant(6, 3.0), k, 0.1);
  CHECK(flat.lower == 3.0);
  CHECK(flat.upper == 3.0);

  const auto kb = bounding_kappas(10000, 0.5);
  CHECK(kb.kappa_b == doctest::Approx(10.0));
  CHECK(kb.kappa_n == doctest::Approx(std::pow(10000.0, 0.375)));
  const auto ka = kappas_for_alpha(10000, 0.5, 0.5);
  CHECK(ka.kappa_n == doctest::Approx(std::pow(10000.0, 0.5)));
  CHECK(ka.kappa_b == doctest::Approx(std::pow(ka.kappa_n, 0.5)));

  // Larger kappa_b and smaller kappa_n widen the interval.
  Rng rng(3);
  const Eigen::VectorXd it = random_members(rng, 12);
  const auto base = qci2_iterated(it.mean(), it, KappaPair{20.0, 5.0, 0.5}, 0.1);
  CHECK(contains(qci2_iterated(it.mean(), it, KappaPair{20.0, 8.0, 0.5}, 0.1), base));
  CHECK(contains(qci2_iterated(it.mean(), it, KappaPair{12.0, 5.0, 0.5}, 0.1), base));
  CHECK_THROWS_AS(qci2_iterated(1.0, Eigen::VectorXd::Constant(1, 1.0), k, 0.1), ConfigError);
}

TEST_CASE("interval properties over random inputs") {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const Index q = 2 + static_cast<Index>(rng.below(60));
    const std::size_t n = 100 + rng.below(50000);
    const double beta = 0.3 + 0.6 * rng.uniform();
    const Eigen::VectorXd m = random_members(rng, q);
    const double mean = m.mean();
    const double y = mean + 3.0 * rng.normal();
    const Eigen::VectorXd it = random_members(rng, q);
    const KappaPair k = bounding_kappas(n, beta);

    auto all = [&](double delta) {
      return std::vector<IntervalResult>{
          qci1(m, delta), pci1(mean, m, n, beta, delta),
          pci_enlarged(mean, m, y, n, beta, delta, IntervalMethod::PCI2),
          pci_enlarged(mean, m, y, n, beta, delta, IntervalMethod::PCI3),
          qci2_iterated(mean, it, k, delta)};
    };
    const auto wide = all(0.05);
    const auto narrow = all(0.10);
    for (std::size_t i = 0; i < wide.size(); ++i) {
      CHECK(wide[i].lower <= wide[i].upper);
      CHECK(contains(wide[i], narrow[i]));
    }
    CHECK(contains(wide[2], wide[3]));
    CHECK(contains(wide[3], wide[1]));

    std::vector<double> sorted(m.data(), m.data() + q);
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::binary_search(sorted.begin(), sorted.end(), narrow[0].lower));
    CHECK(std::binary_search(sorted.begin(), sorted.end(), narrow[0].upper));

    const double t = 5.0 * rng.normal();
    const Eigen::VectorXd ms = m.array() + t;
    const Eigen::VectorXd its = it.array() + t;
    const auto s1 = pci1(mean + t, ms, n, beta, 0.1);
    CHECK(s1.lower == doctest::Approx(narrow[1].lower + t).epsilon(1e-9));
    CHECK(s1.upper == doctest::Approx(narrow[1].upper + t).epsilon(1e-9));
    const auto s0 = qci1(ms, 0.1);
    CHECK(s0.lower == doctest::Approx(narrow[0].lower + t).epsilon(1e-9));
    const auto s4 = qci2_iterated(mean + t, its, k, 0.1);
    CHECK(s4.lower == doctest::Approx(narrow[4].lower + t).epsilon(1e-9));
    CHECK(s4.upper == doctest::Approx(narrow[4].upper + t).epsilon(1e-9));
  }
}

TEST_CASE("residual prediction interval") {
  const auto zero = make_residual_distribution(std::vector<double>(10, 0.0));
  const auto point = prediction_interval(1.5, zero, 0.1);
  CHECK(point.lower == 1.5);
  CHECK(point.upper == 1.5);
  CHECK(point.method == IntervalMethod::PI);

  const auto pm = make_residual_distribution({1.0, -1.0});
  CHECK(pm.sorted_residuals == std::vector<double>{-1.0, 1.0});
  CHECK(pm.mean == 0.0);
  const auto skew = make_residual_distribution({1.0, 2.0, 3.0});
  CHECK(skew.mean == 2.0);  // kept, not removed

  // Normal-quantile-spaced residuals give a length near 2 z_0.95.
  const int m = 10000;
  std::vector<double> r(m);
  for (int i = 0; i < m; ++i) r[i] = normal_quantile((i + 0.5) / m);
  const auto dist = make_residual_distribution(r);
  const auto pi = prediction_interval(0.0, dist, 0.1);
  CHECK(pi.length() == doctest::Approx(2 * 1.6448536269514722).epsilon(1e-3));
  const auto shifted = prediction_interval(2.0, dist, 0.1);
  CHECK(shifted.lower == doctest::Approx(pi.lower + 2.0));
  CHECK(shifted.upper == doctest::Approx(pi.upper + 2.0));

  // Coverage of fresh draws from the residual law.
  Rng rng(8);
  std::vector<double> draws(m);
  for (auto& v : draws) v = rng.normal();
  const auto fitted = prediction_interval(0.0, make_residual_distribution(draws), 0.1);
  int inside = 0;
  for (int i = 0; i < 20000; ++i) inside += fitted.contains(rng.normal());
  CHECK(std::abs(inside / 20000.0 - 0.9) < 0.02);
  CHECK_THROWS(make_residual_distribution({}));
}

TEST_CASE("interval method names") {
  for (auto m : {IntervalMethod::QCI1, IntervalMethod::QCI2, IntervalMethod::PCI1,
                 IntervalMethod::PCI2, IntervalMethod::PCI3, IntervalMethod::PI})
    CHECK(parse_interval_method(to_string(m)) == m);
  CHECK(parse_interval_method("qci1") == IntervalMethod::QCI1);
  CHECK_FALSE(parse_interval_method("CI9"));
}
