#pragma once

#include <Eigen/Dense>

#include <optional>

#include "ssdnn/block_plan.hpp"
#include "ssdnn/network.hpp"

namespace ssdnn {

/// Regression sample with one observation per column of x.
struct Dataset {
  Eigen::MatrixXd x;  // d x n
  Eigen::VectorXd y;  // n
  /// Observed errors when the data came from a simulator (y = f(x) + eps).
  std::optional<Eigen::VectorXd> eps;

  Index size() const { return x.cols(); }
  Index dim() const { return x.rows(); }

  /// The contiguous slice of points covered by a block.
  Dataset slice(const IndexRange& range) const {
    const auto first = static_cast<Index>(range.offset());
    const auto count = static_cast<Index>(range.size());
    Dataset out{x.middleCols(first, count), y.segment(first, count), std::nullopt};
    if (eps) out.eps = eps->segment(first, count);
    return out;
  }

  void validate() const {
    if (y.size() != x.cols()) throw DataError("dataset: x and y have different lengths");
    if (eps && eps->size() != y.size()) throw DataError("dataset: eps has the wrong length");
  }
};

}  // namespace ssdnn
