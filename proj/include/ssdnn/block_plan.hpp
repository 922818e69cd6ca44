#pragma once

#include <cstddef>

namespace ssdnn {

/// Scalable-subsampling block layout: q blocks of length b at stride h over
/// n ordered points. Block j (1-based) covers [(j-1)h + 1, (j-1)h + b].
/// Points past (q-1)h + b belong to no block.
struct BlockPlan {
  std::size_t n = 0;
  std::size_t b = 0;
  std::size_t h = 0;
  std::size_t q = 0;

  /// Index of the last point any block touches (1-based).
  std::size_t covered() const { return (q - 1) * h + b; }

  friend bool operator==(const BlockPlan&, const BlockPlan&) = default;
};

/// Closed 1-based index range.
struct IndexRange {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t size() const { return last - first + 1; }
  /// 0-based offset of the first element.
  std::size_t offset() const { return first - 1; }

  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// q = floor((n - b) / h) + 1. Requires 1 <= b <= n and h >= 1.
BlockPlan make_plan(std::size_t n, std::size_t b, std::size_t h);

/// b = floor(n^beta), h = max(1, floor(a * b)).
BlockPlan plan_from_beta(std::size_t n, double beta, double overlap = 1.0);

IndexRange block_indices(const BlockPlan& plan, std::size_t j);

/// Second-stage plan inside one first-stage block: n' = b, b' = floor(b^beta),
/// h' = b'. The block count is floor((b - b')/b') + 1 capped at
/// floor(n^{beta(1-beta)}), the number of second-stage subsamples used by the
/// method's own experiments (12 at n = 200000, beta = 0.7, where the uncapped
/// count would be 13).
BlockPlan iterated_plan(const BlockPlan& plan, double beta);

/// floor(x) for positive x, nudged so that values within a few ulps below an
/// integer (e.g. pow(10000, 0.25) = 9.999...) still floor to that integer.
std::size_t stable_floor(double x);

}  // namespace ssdnn
