#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ssdnn/errors.hpp"
#include "ssdnn/random.hpp"

namespace ssdnn {

using Index = Eigen::Index;

/// Architecture of a fully connected ReLU network: input_dim -> hidden
/// widths -> output_dim, with ReLU after every hidden layer and an affine
/// output layer.
struct NetworkSpec {
  Index input_dim = 1;
  std::vector<Index> hidden_widths;
  Index output_dim = 1;

  Index depth() const { return static_cast<Index>(hidden_widths.size()); }

  /// H_0 .. H_{L+1}.
  std::vector<Index> layer_sizes() const {
    std::vector<Index> sizes;
    sizes.reserve(hidden_widths.size() + 2);
    sizes.push_back(input_dim);
    sizes.insert(sizes.end(), hidden_widths.begin(), hidden_widths.end());
    sizes.push_back(output_dim);
    return sizes;
  }

  void validate() const {
    if (input_dim < 1 || output_dim < 1)
      throw ConfigError("network: input and output dimensions must be >= 1");
    if (hidden_widths.empty())
      throw ConfigError("network: at least one hidden layer is required");
    for (Index w : hidden_widths)
      if (w < 1) throw ConfigError("network: hidden widths must be >= 1");
  }

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

/// sum over layers of H_i * H_{i+1} + H_{i+1}.
inline Index param_count(const NetworkSpec& spec) {
  const auto sizes = spec.layer_sizes();
  Index total = 0;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i)
    total += sizes[i] * sizes[i + 1] + sizes[i + 1];
  return total;
}

std::string to_string(const NetworkSpec& spec);

/// Weights and biases of one network, stored in a single contiguous vector.
///
/// Layer l occupies a column-major H_{l+1} x H_l weight block followed by its
/// H_{l+1} bias. weight(l) and bias(l) are Eigen::Map views into that
/// storage, so optimizers and gradient checks can work on values() directly.
/// The same type doubles as the gradient container.
template <typename Scalar>
class NetworkParams {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using MatrixMap = Eigen::Map<Matrix>;
  using ConstMatrixMap = Eigen::Map<const Matrix>;
  using VectorMap = Eigen::Map<Vector>;
  using ConstVectorMap = Eigen::Map<const Vector>;

  NetworkParams() = default;

  /// All-zero parameters shaped by spec.
  explicit NetworkParams(NetworkSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    const auto sizes = spec_.layer_sizes();
    Index offset = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      weight_offsets_.push_back(offset);
      offset += sizes[l] * sizes[l + 1];
      bias_offsets_.push_back(offset);
      offset += sizes[l + 1];
    }
    values_ = Vector::Zero(offset);
  }

  const NetworkSpec& spec() const { return spec_; }

  /// L + 1 affine layers.
  Index layer_count() const { return static_cast<Index>(weight_offsets_.size()); }
  Index size() const { return values_.size(); }

  Index rows(Index l) const { return l + 1 == layer_count() ? spec_.output_dim : spec_.hidden_widths[l]; }
  Index cols(Index l) const { return l == 0 ? spec_.input_dim : spec_.hidden_widths[l - 1]; }

  MatrixMap weight(Index l) {
    return MatrixMap(values_.data() + weight_offsets_[l], rows(l), cols(l));
  }
  ConstMatrixMap weight(Index l) const {
    return ConstMatrixMap(values_.data() + weight_offsets_[l], rows(l), cols(l));
  }
  VectorMap bias(Index l) { return VectorMap(values_.data() + bias_offsets_[l], rows(l)); }
  ConstVectorMap bias(Index l) const {
    return ConstVectorMap(values_.data() + bias_offsets_[l], rows(l));
  }

  Vector& values() { return values_; }
  const Vector& values() const { return values_; }

  bool same_shape(const NetworkParams& other) const { return spec_ == other.spec_; }

  friend bool operator==(const NetworkParams& a, const NetworkParams& b) {
    return a.spec_ == b.spec_ && a.values_ == b.values_;
  }

 private:
  NetworkSpec spec_;
  std::vector<Index> weight_offsets_;
  std::vector<Index> bias_offsets_;
  Vector values_;
};

using Network = NetworkParams<double>;

/// Weights uniform on [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
template <typename Scalar = double>
NetworkParams<Scalar> init_params(const NetworkSpec& spec, std::uint64_t seed) {
  NetworkParams<Scalar> params(spec);
  Rng rng(seed);
  for (Index l = 0; l < params.layer_count(); ++l) {
    auto w = params.weight(l);
    const double bound = 1.0 / std::sqrt(static_cast<double>(w.cols()));
    for (Index j = 0; j < w.cols(); ++j)
      for (Index i = 0; i < w.rows(); ++i)
        w(i, j) = static_cast<Scalar>(bound * (2.0 * rng.uniform() - 1.0));
  }
  return params;
}

namespace detail {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar, typename Derived>
void check_input(const NetworkParams<Scalar>& params, const Eigen::MatrixBase<Derived>& x) {
  if (x.rows() != params.spec().input_dim)
    throw DataError("network: input has " + std::to_string(x.rows()) +
                    " rows, expected " + std::to_string(params.spec().input_dim));
}

/// Forward pass that keeps every layer's post-activation (activations[0] is
/// the input) for reuse by backpropagation.
template <typename Scalar, typename Derived>
void forward_cached(const NetworkParams<Scalar>& params, const Eigen::MatrixBase<Derived>& x,
                    std::vector<Matrix<Scalar>>& activations) {
  const Index layers = params.layer_count();
  activations.resize(static_cast<std::size_t>(layers) + 1);
  activations[0] = x;
  for (Index l = 0; l < layers; ++l) {
    auto& next = activations[static_cast<std::size_t>(l) + 1];
    next.noalias() = params.weight(l) * activations[static_cast<std::size_t>(l)];
    next.colwise() += params.bias(l);
    if (l + 1 < layers) next = next.cwiseMax(Scalar(0));
  }
}

}  // namespace detail

/// Network output for a batch of inputs stored one per column (d x m).
/// Returns output_dim x m.
template <typename Scalar, typename Derived>
detail::Matrix<Scalar> forward(const NetworkParams<Scalar>& params,
                               const Eigen::MatrixBase<Derived>& x) {
  detail::check_input(params, x);
  detail::Matrix<Scalar> current = x;
  for (Index l = 0; l < params.layer_count(); ++l) {
    detail::Matrix<Scalar> next = params.weight(l) * current;
    next.colwise() += params.bias(l);
    if (l + 1 < params.layer_count()) next = next.cwiseMax(Scalar(0));
    current = std::move(next);
  }
  return current;
}

/// Scalar output of a single-output network at one point.
template <typename Scalar, typename Derived>
Scalar predict(const NetworkParams<Scalar>& params, const Eigen::MatrixBase<Derived>& x) {
  if (params.spec().output_dim != 1)
    throw ConfigError("predict: network must have a single output");
  return forward(params, x)(0, 0);
}

namespace detail {

template <typename Scalar, typename DerivedX, typename DerivedY>
void check_batch(const NetworkParams<Scalar>& params, const Eigen::MatrixBase<DerivedX>& x,
                 const Eigen::MatrixBase<DerivedY>& y) {
  check_input(params, x);
  if (x.cols() == 0) throw DataError("network: empty batch");
  if (y.rows() != params.spec().output_dim || y.cols() != x.cols())
    throw DataError("network: targets must be output_dim x batch");
}

}  // namespace detail

/// Mean over the batch of ||f(x) - y||^2 / 2. Targets are output_dim x m.
template <typename Scalar, typename DerivedX, typename DerivedY>
Scalar mse_loss(const NetworkParams<Scalar>& params, const Eigen::MatrixBase<DerivedX>& x,
                const Eigen::MatrixBase<DerivedY>& y) {
  detail::check_batch(params, x, y);
  const auto out = forward(params, x);
  return (out - y).squaredNorm() / (Scalar(2) * static_cast<Scalar>(x.cols()));
}

/// Reusable buffers for repeated gradient evaluations on same-sized batches.
template <typename Scalar>
struct BackpropWorkspace {
  std::vector<detail::Matrix<Scalar>> activations;
  detail::Matrix<Scalar> delta;
  detail::Matrix<Scalar> delta_prev;
};

/// Gradient of mse_loss written into grad (shaped like params). The ReLU
/// derivative at 0 is taken as 0. Returns the batch loss as a by-product.
template <typename Scalar, typename DerivedX, typename DerivedY>
Scalar backward_into(const NetworkParams<Scalar>& params, const Eigen::MatrixBase<DerivedX>& x,
                     const Eigen::MatrixBase<DerivedY>& y, NetworkParams<Scalar>& grad,
                     BackpropWorkspace<Scalar>& ws) {
  detail::check_batch(params, x, y);
  if (!grad.same_shape(params)) grad = NetworkParams<Scalar>(params.spec());

  detail::forward_cached(params, x, ws.activations);
  const Index layers = params.layer_count();
  const Scalar inv_m = Scalar(1) / static_cast<Scalar>(x.cols());

  ws.delta = ws.activations.back() - y;
  const Scalar loss = ws.delta.squaredNorm() * inv_m / Scalar(2);
  ws.delta *= inv_m;

  for (Index l = layers - 1; l >= 0; --l) {
    const auto& input = ws.activations[static_cast<std::size_t>(l)];
    grad.weight(l).noalias() = ws.delta * input.transpose();
    grad.bias(l) = ws.delta.rowwise().sum();
    if (l == 0) break;
    ws.delta_prev.noalias() = params.weight(l).transpose() * ws.delta;
    // input holds ReLU outputs of layer l; positive exactly where the gate is open.
    ws.delta = (input.array() > Scalar(0)).select(ws.delta_prev.array(), Scalar(0)).matrix();
  }
  return loss;
}

template <typename Scalar, typename DerivedX, typename DerivedY>
NetworkParams<Scalar> backward(const NetworkParams<Scalar>& params,
                               const Eigen::MatrixBase<DerivedX>& x,
                               const Eigen::MatrixBase<DerivedY>& y) {
  NetworkParams<Scalar> grad(params.spec());
  BackpropWorkspace<Scalar> ws;
  backward_into(params, x, y, grad, ws);
  return grad;
}

}  // namespace ssdnn
