#pragma once

#include <vector>

#include "srf/tensor.hpp"

namespace srf {

// Forward/backward kernels on plain tensors. All backward kernels
// accumulate (+=) into their output arguments; pass nullptr to skip a
// gradient. Reductions use a fixed sequential order so results are
// bit-reproducible.

// 2-D convolution with zero padding.
// input [b, c_in, h, w], kernel [c_out, c_in, kh, kw].
template <typename T>
TensorT<T> conv2d(const TensorT<T>& input, const TensorT<T>& kernel, int stride,
                  int padding);

template <typename T>
void conv2d_backward(const TensorT<T>& input, const TensorT<T>& kernel,
                     int stride, int padding, const TensorT<T>& grad_out,
                     TensorT<T>* grad_input, TensorT<T>* grad_kernel);

// Bilinear upsampling by an integer factor, align-corners=false.
template <typename T>
TensorT<T> upsample_bilinear(const TensorT<T>& input, int factor);

template <typename T>
void upsample_bilinear_backward(const Shape& input_shape, int factor,
                                const TensorT<T>& grad_out,
                                TensorT<T>* grad_input);

// Rank-2 matrix product.
template <typename T>
TensorT<T> matmul(const TensorT<T>& a, const TensorT<T>& b);

template <typename T>
void matmul_backward(const TensorT<T>& a, const TensorT<T>& b,
                     const TensorT<T>& grad_out, TensorT<T>* grad_a,
                     TensorT<T>* grad_b);

// Softmax over all elements (max-subtracted). Output shape matches input.
template <typename T>
TensorT<T> softmax_flat(const TensorT<T>& x);

// Softmax applied independently to each row of a rank-2 tensor.
template <typename T>
TensorT<T> softmax_rows(const TensorT<T>& x);

// Backward shared by both softmax variants; `rows`/`cols` describe the
// grouping the forward used (flat = one row).
template <typename T>
void softmax_grouped_backward(const TensorT<T>& out, const TensorT<T>& grad_out,
                              std::int64_t rows, std::int64_t cols,
                              TensorT<T>* grad_in);

// Depthwise blur: one shared [kh, kw] kernel applied to every channel,
// symmetric (edge-repeating mirror) boundary, output size preserved.
// input rank 4 [b, c, h, w].
template <typename T>
TensorT<T> blur_symmetric(const TensorT<T>& input, const TensorT<T>& kernel);

template <typename T>
void blur_symmetric_backward(const TensorT<T>& input, const TensorT<T>& kernel,
                             const TensorT<T>& grad_out, TensorT<T>* grad_input,
                             TensorT<T>* grad_kernel);

// Keep every s-th sample starting at offset floor(s/2) in each block.
// Spatial extents must be divisible by s.
template <typename T>
TensorT<T> decimate(const TensorT<T>& input, int s);

template <typename T>
void decimate_backward(const Shape& input_shape, int s,
                       const TensorT<T>& grad_out, TensorT<T>* grad_input);

// Per-pixel dot product over the channel axis: [b,C,h,w] x [b,C,h,w]
// -> [b,1,h,w].
template <typename T>
TensorT<T> channel_dot(const TensorT<T>& a, const TensorT<T>& b);

// Per-pixel L2 norm over the channel axis: [b,C,h,w] -> [b,1,h,w].
template <typename T>
TensorT<T> channel_norm(const TensorT<T>& x);

// Power-iteration estimate of the largest singular value of a rank-2
// matrix, starting from (and optionally updating) a persistent left
// vector u. Returns the estimate; fills the final u and v iterates.
template <typename T>
T power_iteration_sigma(const TensorT<T>& w2d, const std::vector<T>& u_init,
                        int iters, std::vector<T>* u_out,
                        std::vector<T>* v_out);

// Mirror index into [0, n) including the edge sample (-1 -> 0, n -> n-1).
inline int reflect_symmetric(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

}  // namespace srf
