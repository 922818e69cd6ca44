#include "ssdnn/block_plan.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ssdnn/errors.hpp"

namespace ssdnn {

std::size_t stable_floor(double x) {
  if (!(x >= 0)) return 0;
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, nearest)) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::floor(x));
}

BlockPlan make_plan(std::size_t n, std::size_t b, std::size_t h) {
  if (b < 1 || b > n)
    throw ConfigError("block plan: need 1 <= b <= n (b=" + std::to_string(b) +
                      ", n=" + std::to_string(n) + ")");
  if (h < 1) throw ConfigError("block plan: stride h must be >= 1");
  return BlockPlan{n, b, h, (n - b) / h + 1};
}

BlockPlan plan_from_beta(std::size_t n, double beta, double overlap) {
  if (n < 2) throw ConfigError("block plan: n must be >= 2");
  if (!(beta > 0 && beta < 1)) throw ConfigError("block plan: beta must lie in (0, 1)");
  if (!(overlap > 0)) throw ConfigError("block plan: overlap factor a must be > 0");
  const std::size_t b = stable_floor(std::pow(static_cast<double>(n), beta));
  if (b == 0) throw ConfigError("block plan: n^beta < 1 gives an empty block");
  const std::size_t h = std::max<std::size_t>(1, stable_floor(overlap * static_cast<double>(b)));
  return make_plan(n, std::min(b, n), h);
}

IndexRange block_indices(const BlockPlan& plan, std::size_t j) {
  if (j < 1 || j > plan.q)
    throw ConfigError("block plan: block index " + std::to_string(j) + " outside 1.." +
                      std::to_string(plan.q));
  const std::size_t first = (j - 1) * plan.h + 1;
  return IndexRange{first, first + plan.b - 1};
}

BlockPlan iterated_plan(const BlockPlan& plan, double beta) {
  if (plan.b < 2) throw ConfigError("iterated plan: first-stage block length must be >= 2");
  if (!(beta > 0 && beta < 1)) throw ConfigError("iterated plan: beta must lie in (0, 1)");
  const std::size_t inner_b = stable_floor(std::pow(static_cast<double>(plan.b), beta));
  if (inner_b == 0) throw ConfigError("iterated plan: b^beta < 1 gives an empty block");
  BlockPlan inner = make_plan(plan.b, inner_b, inner_b);
  const std::size_t target =
      stable_floor(std::pow(static_cast<double>(plan.n), beta * (1.0 - beta)));
  inner.q = std::clamp<std::size_t>(target, 1, inner.q);
  return inner;
}

}  // namespace ssdnn
