#include "doctest.h"

#include "ssdnn/block_plan.hpp"
#include "ssdnn/errors.hpp"
#include "ssdnn/random.hpp"

using namespace ssdnn;

TEST_CASE("plan_from_beta reproduces the large-sample block count") {
  const auto plan = plan_from_beta(200000, 0.7, 1.0);
  CHECK(plan.b == 5137);
  CHECK(plan.h == 5137);
  CHECK(plan.q == 38);
}

TEST_CASE("overlapping blocks by hand") {
  const auto plan = make_plan(10, 4, 3);
  CHECK(plan.q == 3);
  CHECK(block_indices(plan, 1) == IndexRange{1, 4});
  CHECK(block_indices(plan, 2) == IndexRange{4, 7});
  CHECK(block_indices(plan, 3) == IndexRange{7, 10});
  CHECK_THROWS_AS(block_indices(plan, 0), ConfigError);
  CHECK_THROWS_AS(block_indices(plan, 4), ConfigError);
}

TEST_CASE("block_indices examples") {
  const auto plan = make_plan(100, 30, 30);
  CHECK(block_indices(plan, 1) == IndexRange{1, 30});
  CHECK(block_indices(plan, 3) == IndexRange{61, 90});

  const auto dense = make_plan(20, 5, 1);
  CHECK(dense.q == 16);
  for (std::size_t j = 1; j < dense.q; ++j)
    CHECK(block_indices(dense, j + 1).first == block_indices(dense, j).first + 1);
}

TEST_CASE("a = 1 gives adjacent disjoint blocks") {
  const auto plan = plan_from_beta(1000, 0.5, 1.0);
  CHECK(plan.h == plan.b);
  for (std::size_t j = 1; j < plan.q; ++j)
    CHECK(block_indices(plan, j + 1).first == block_indices(plan, j).last + 1);
  CHECK(block_indices(plan, plan.q).last == plan.covered());
}

TEST_CASE("iterated plans") {
  const auto outer = plan_from_beta(200000, 0.7, 1.0);
  const auto inner = iterated_plan(outer, 0.7);
  CHECK(inner.n == 5137);
  CHECK(inner.b == 395);
  CHECK(inner.q == 12);

  const auto small = iterated_plan(make_plan(10000, 100, 100), 0.5);
  CHECK(small.b == 10);
  CHECK(small.q == 10);

  CHECK_THROWS_AS(iterated_plan(make_plan(10, 1, 1), 0.5), ConfigError);
  CHECK_THROWS_AS(iterated_plan(outer, 1.0), ConfigError);
}

TEST_CASE("invalid plans are rejected") {
  CHECK_THROWS_AS(make_plan(10, 0, 1), ConfigError);
  CHECK_THROWS_AS(make_plan(10, 11, 1), ConfigError);
  CHECK_THROWS_AS(make_plan(10, 5, 0), ConfigError);
  CHECK_THROWS_AS(plan_from_beta(1, 0.5), ConfigError);
  CHECK_THROWS_AS(plan_from_beta(100, 0.0), ConfigError);
  CHECK_THROWS_AS(plan_from_beta(100, 1.0), ConfigError);
  CHECK_THROWS_AS(plan_from_beta(100, 0.5, 0.0), ConfigError);
}

TEST_CASE("plan invariants over random parameters") {
  Rng rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.below(5000);
    const double beta = 0.05 + 0.9 * rng.uniform();
    const double a = 0.05 + 2.0 * rng.uniform();
    const auto plan = plan_from_beta(n, beta, a);
    REQUIRE(plan.b >= 1);
    CHECK((plan.q - 1) * plan.h + plan.b <= n);
    CHECK(n < plan.q * plan.h + plan.b);
    for (std::size_t j = 1; j <= plan.q; ++j) {
      const auto r = block_indices(plan, j);
      CHECK(r.size() == plan.b);
      CHECK(r.first >= 1);
      CHECK(r.last <= n);
    }
    if (plan.h == plan.b && plan.q > 1)
      CHECK(block_indices(plan, 2).first > block_indices(plan, 1).last);
    // Monotone in n while b and h stay fixed.
    CHECK(make_plan(n + 1 + rng.below(100), plan.b, plan.h).q >= plan.q);
  }
}

TEST_CASE("q can drop when b steps up") {
  CHECK(plan_from_beta(30, 0.7, 1.0).q == 3);
  CHECK(plan_from_beta(31, 0.7, 1.0).b == 11);
  CHECK(plan_from_beta(31, 0.7, 1.0).q == 2);
}
