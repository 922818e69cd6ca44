#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "ssdnn/adam.hpp"
#include "ssdnn/network.hpp"
#include "ssdnn/random.hpp"

#if defined(__SSE2__)
#include <pmmintrin.h>
#include <xmmintrin.h>
#endif

namespace ssdnn {
namespace detail {

/// Flushes subnormal results and operands to zero while alive. Adam moments of
/// dead units decay through the subnormal range, where arithmetic is many
/// times slower.
class FlushSubnormals {
 public:
#if defined(__SSE2__)
  FlushSubnormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040); }
  ~FlushSubnormals() { _mm_setcsr(saved_); }

 private:
  unsigned saved_;

 public:
#else
  FlushSubnormals() = default;
#endif
  FlushSubnormals(const FlushSubnormals&) = delete;
  FlushSubnormals& operator=(const FlushSubnormals&) = delete;
};

}  // namespace detail

/// Shuffling stream derived from TrainConfig::seed; initialization uses the seed itself.
inline constexpr std::uint64_t kShuffleStream = 0x53485546;  // "SHUF"

/// Mini-batch Adam on the mean squared error.
///
/// Inputs are d x n (one sample per column), targets output_dim x n. Each
/// epoch reshuffles the sample order with a generator seeded from cfg.seed
/// and walks it in batches of cfg.batch_size; the last batch may be short.
/// The result depends only on (spec, data, column order, cfg).
template <typename Scalar = double, typename DerivedX, typename DerivedY>
NetworkParams<Scalar> train(const NetworkSpec& spec, const Eigen::MatrixBase<DerivedX>& x,
                            const Eigen::MatrixBase<DerivedY>& y, const TrainConfig& cfg) {
  spec.validate();
  cfg.validate();
  const Index n = x.cols();
  if (n == 0) throw DataError("train: empty data set");
  if (x.rows() != spec.input_dim)
    throw DataError("train: data has " + std::to_string(x.rows()) +
                    " covariates, network expects " + std::to_string(spec.input_dim));
  if (y.rows() != spec.output_dim || y.cols() != n)
    throw DataError("train: targets must be output_dim x n");

  auto params = init_params<Scalar>(spec, cfg.seed);
  if (cfg.epochs == 0) return params;

  const detail::Matrix<Scalar> xs = x.template cast<Scalar>();
  const detail::Matrix<Scalar> ys = y.template cast<Scalar>();

  const detail::FlushSubnormals flush;
  Rng rng(derive_seed(cfg.seed, kShuffleStream));
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});

  AdamState<Scalar> state(spec);
  NetworkParams<Scalar> grad(spec);
  BackpropWorkspace<Scalar> ws;
  detail::Matrix<Scalar> xb, yb;

  for (Index epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    for (Index start = 0; start < n; start += cfg.batch_size) {
      const Index m = std::min(cfg.batch_size, n - start);
      xb.resize(xs.rows(), m);
      yb.resize(ys.rows(), m);
      for (Index k = 0; k < m; ++k) {
        const Index col = order[static_cast<std::size_t>(start + k)];
        xb.col(k) = xs.col(col);
        yb.col(k) = ys.col(col);
      }
      backward_into(params, xb, yb, grad, ws);
      adam_step(params, state, grad, cfg);
    }
    if (!params.values().allFinite())
      throw NumericalError("train: non-finite parameters after epoch " +
                           std::to_string(epoch + 1) + " (network " + to_string(spec) + ")");
  }
  return params;
}

}  // namespace ssdnn
