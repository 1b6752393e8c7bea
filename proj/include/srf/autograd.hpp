#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "srf/tensor.hpp"

namespace srf {

// One node of the reverse-mode computation graph. Nodes are created by
// the op builders below and form an acyclic DAG through `parents`.
// `backward_fn` consumes this node's gradient and accumulates into the
// parents' gradients; accumulation is additive, so reusing a node in
// several places sums the contributions.
template <typename T>
struct NodeT {
  TensorT<T> value;
  TensorT<T> grad;  // allocated lazily, always matches value's shape
  bool requires_grad = false;
  std::vector<std::shared_ptr<NodeT>> parents;
  std::function<void(NodeT&)> backward_fn;

  TensorT<T>& ensure_grad() {
    if (!grad.defined()) grad = TensorT<T>(value.shape());
    return grad;
  }
};

template <typename T>
using NodeRef = std::shared_ptr<NodeT<T>>;

template <typename T>
NodeRef<T> make_constant(TensorT<T> value);

template <typename T>
NodeRef<T> make_parameter(TensorT<T> value);

// ---- elementwise ----
template <typename T>
NodeRef<T> add(const NodeRef<T>& a, const NodeRef<T>& b);
template <typename T>
NodeRef<T> sub(const NodeRef<T>& a, const NodeRef<T>& b);
template <typename T>
NodeRef<T> mul(const NodeRef<T>& a, const NodeRef<T>& b);
template <typename T>
NodeRef<T> div(const NodeRef<T>& a, const NodeRef<T>& b);
template <typename T>
NodeRef<T> scale(const NodeRef<T>& a, T factor);
template <typename T>
NodeRef<T> add_scalar(const NodeRef<T>& a, T constant);
template <typename T>
NodeRef<T> relu(const NodeRef<T>& a);

// arccos of the input clamped to [-1+1e-7, 1-1e-7]; the clamp keeps the
// gradient finite at the ends (zero outside the clamp interval).
template <typename T>
NodeRef<T> arccos_clamped(const NodeRef<T>& a);

// ---- reductions (scalar outputs, fixed summation order) ----
template <typename T>
NodeRef<T> sum(const NodeRef<T>& a);
template <typename T>
NodeRef<T> abs_sum(const NodeRef<T>& a);
template <typename T>
NodeRef<T> mean(const NodeRef<T>& a);
template <typename T>
NodeRef<T> mean_abs(const NodeRef<T>& a);

// ---- structure ----
template <typename T>
NodeRef<T> reshape(const NodeRef<T>& a, Shape shape);
template <typename T>
NodeRef<T> concat_channels(const NodeRef<T>& a, const NodeRef<T>& b);

// ---- linear / image ops ----
template <typename T>
NodeRef<T> conv2d(const NodeRef<T>& input, const NodeRef<T>& kernel, int stride,
                  int padding);
template <typename T>
NodeRef<T> upsample_bilinear(const NodeRef<T>& input, int factor);
template <typename T>
NodeRef<T> matmul(const NodeRef<T>& a, const NodeRef<T>& b);
template <typename T>
NodeRef<T> softmax_flat(const NodeRef<T>& a);
template <typename T>
NodeRef<T> softmax_rows(const NodeRef<T>& a);
// out[i][j] = a[i][j] + v[j]
template <typename T>
NodeRef<T> add_rowvec(const NodeRef<T>& a, const NodeRef<T>& v);
template <typename T>
NodeRef<T> blur_symmetric(const NodeRef<T>& input, const NodeRef<T>& kernel);
template <typename T>
NodeRef<T> decimate(const NodeRef<T>& input, int s);
template <typename T>
NodeRef<T> channel_dot(const NodeRef<T>& a, const NodeRef<T>& b);
template <typename T>
NodeRef<T> channel_norm(const NodeRef<T>& a);

// Spectrally normalized weight: lambda * W / (sigma_hat + 1e-12), where
// sigma_hat is the power-iteration estimate of W's largest singular
// value (W viewed as rows x (cols*kh*kw) for rank-4 kernels). u_state
// persists across calls and is refreshed in place when update_u is set.
// The backward pass treats the final u, v iterates as constants; with
// detach_sigma the scale itself is treated as a constant too.
template <typename T>
NodeRef<T> spectral_normalize(const NodeRef<T>& weight, T lambda, int iters,
                              std::vector<T>& u_state, bool update_u,
                              bool detach_sigma);

// Populates gradients of everything reachable from `loss`, which must
// be scalar. Gradients accumulate; callers zero them between passes.
template <typename T>
void backward(const NodeRef<T>& loss);

}  // namespace srf
