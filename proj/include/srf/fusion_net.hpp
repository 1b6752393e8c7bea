#pragma once

// Per-stage fusion network: upsampled LR residual and HR residual are
// concatenated along channels, passed through a head conv, a stack of
// residual blocks whose conv weights are spectrally normalized (making
// each block's residual branch a contraction for lambda < 1), and a
// zero-initialized tail conv.

#include <string>

#include "srf/autograd.hpp"
#include "srf/param_store.hpp"
#include "srf/rng.hpp"

namespace srf {

template <typename T>
class FusionNetT {
 public:
  FusionNetT(std::string prefix, int in_channels, int out_channels,
             int features, int n_blocks, T lambda_sn, bool use_sn,
             int sn_iters, bool sn_detach_sigma);

  // Registers head/block/tail conv kernels under "<prefix>." names.
  // Head and block convs are He-uniform; the tail conv starts at zero so
  // the whole network is initially the zero map.
  void init_params(ParamStoreT<T>& store, Rng& rng) const;

  // lr_input: [1, C, h, w]; hr_input: [1, c, H, W] with H = h*s.
  // Returns [1, out_channels, H, W].
  NodeRef<T> forward(ParamStoreT<T>& store, const NodeRef<T>& lr_input,
                     const NodeRef<T>& hr_input, int s, bool update_u) const;

  // One residual block y = x + conv2(relu(conv1(x))) on [1,F,H,W].
  NodeRef<T> resblock_forward(ParamStoreT<T>& store, int block_idx,
                              const NodeRef<T>& x, bool update_u) const;
  // The residual branch g(x) alone.
  NodeRef<T> resblock_branch(ParamStoreT<T>& store, int block_idx,
                             const NodeRef<T>& x, bool update_u) const;

  // Fixed-point inversion of one block: given y = x + g(x), iterate
  // x_{k+1} = y - g(x_k) from x_0 = y. Only contracts when lambda < 1.
  TensorT<T> resblock_invert(ParamStoreT<T>& store, int block_idx,
                             const TensorT<T>& y, int iters) const;

  const std::string& prefix() const { return prefix_; }
  int in_channels() const { return in_channels_; }
  int out_channels() const { return out_channels_; }
  int features() const { return features_; }
  int n_blocks() const { return n_blocks_; }

 private:
  NodeRef<T> conv_param(ParamStoreT<T>& store, const std::string& name,
                        bool normalized, bool update_u) const;

  std::string prefix_;
  int in_channels_;
  int out_channels_;
  int features_;
  int n_blocks_;
  T lambda_sn_;
  bool use_sn_;
  int sn_iters_;
  bool sn_detach_sigma_;
};

using FusionNet = FusionNetT<double>;
using FusionNetF = FusionNetT<float>;

extern template class FusionNetT<float>;
extern template class FusionNetT<double>;

}  // namespace srf
