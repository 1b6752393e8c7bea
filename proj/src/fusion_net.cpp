#include "srf/fusion_net.hpp"

#include <cmath>
#include <utility>

#include "srf/errors.hpp"

namespace srf {

template <typename T>
FusionNetT<T>::FusionNetT(std::string prefix, int in_channels,
                          int out_channels, int features, int n_blocks,
                          T lambda_sn, bool use_sn, int sn_iters,
                          bool sn_detach_sigma)
    : prefix_(std::move(prefix)),
      in_channels_(in_channels),
      out_channels_(out_channels),
      features_(features),
      n_blocks_(n_blocks),
      lambda_sn_(lambda_sn),
      use_sn_(use_sn),
      sn_iters_(sn_iters),
      sn_detach_sigma_(sn_detach_sigma) {
  if (in_channels < 1 || out_channels < 1 || features < 1 || n_blocks < 1) {
    throw ConfigError("fusion net: channel/feature/block counts must be >= 1");
  }
  if (!(lambda_sn > T(0)) || lambda_sn > T(1)) {
    throw ConfigError("fusion net: lambda_sn must be in (0, 1]");
  }
  if (sn_iters < 1) throw ConfigError("fusion net: sn_iters must be >= 1");
}

namespace {

template <typename T>
TensorT<T> he_uniform_conv(int c_out, int c_in, int k, Rng& rng) {
  TensorT<T> w({c_out, c_in, k, k});
  const double bound = std::sqrt(6.0 / (c_in * k * k));
  for (std::int64_t i = 0; i < w.numel(); ++i)
    w[i] = static_cast<T>(rng.uniform(-bound, bound));
  return w;
}

}  // namespace

template <typename T>
void FusionNetT<T>::init_params(ParamStoreT<T>& store, Rng& rng) const {
  store.add(prefix_ + ".head.w",
            he_uniform_conv<T>(features_, in_channels_, 3, rng));
  for (int b = 0; b < n_blocks_; ++b) {
    const std::string bp = prefix_ + ".block" + std::to_string(b);
    store.add(bp + ".conv1.w", he_uniform_conv<T>(features_, features_, 3, rng));
    store.add(bp + ".conv2.w", he_uniform_conv<T>(features_, features_, 3, rng));
  }
  store.add(prefix_ + ".tail.w",
            TensorT<T>({out_channels_, features_, 3, 3}));
}

template <typename T>
NodeRef<T> FusionNetT<T>::conv_param(ParamStoreT<T>& store,
                                     const std::string& name, bool normalized,
                                     bool update_u) const {
  NodeRef<T> w = store.get(name);
  if (!normalized || !use_sn_) return w;
  std::vector<T>& u = store.u_state(name, w->value.dim(0));
  return spectral_normalize(w, lambda_sn_, sn_iters_, u, update_u,
                            sn_detach_sigma_);
}

template <typename T>
NodeRef<T> FusionNetT<T>::resblock_branch(ParamStoreT<T>& store, int block_idx,
                                          const NodeRef<T>& x,
                                          bool update_u) const {
  const std::string bp = prefix_ + ".block" + std::to_string(block_idx);
  NodeRef<T> w1 = conv_param(store, bp + ".conv1.w", true, update_u);
  NodeRef<T> w2 = conv_param(store, bp + ".conv2.w", true, update_u);
  return conv2d(relu(conv2d(x, w1, 1, 1)), w2, 1, 1);
}

template <typename T>
NodeRef<T> FusionNetT<T>::resblock_forward(ParamStoreT<T>& store, int block_idx,
                                           const NodeRef<T>& x,
                                           bool update_u) const {
  return add(x, resblock_branch(store, block_idx, x, update_u));
}

template <typename T>
TensorT<T> FusionNetT<T>::resblock_invert(ParamStoreT<T>& store, int block_idx,
                                          const TensorT<T>& y,
                                          int iters) const {
  TensorT<T> x = y;
  for (int k = 0; k < iters; ++k) {
    NodeRef<T> g =
        resblock_branch(store, block_idx, make_constant(x), false);
    for (std::int64_t i = 0; i < x.numel(); ++i) x[i] = y[i] - g->value[i];
  }
  return x;
}

template <typename T>
NodeRef<T> FusionNetT<T>::forward(ParamStoreT<T>& store,
                                  const NodeRef<T>& lr_input,
                                  const NodeRef<T>& hr_input, int s,
                                  bool update_u) const {
  const TensorT<T>& lr = lr_input->value;
  const TensorT<T>& hr = hr_input->value;
  if (lr.rank() != 4 || hr.rank() != 4) {
    throw ShapeError("fusion forward: expected rank-4 inputs, got " +
                     shape_str(lr.shape()) + " and " + shape_str(hr.shape()));
  }
  if (hr.dim(2) != lr.dim(2) * s || hr.dim(3) != lr.dim(3) * s) {
    throw ShapeError("fusion forward: HR extents " + shape_str(hr.shape()) +
                     " are not " + std::to_string(s) + "x the LR extents " +
                     shape_str(lr.shape()));
  }
  if (lr.dim(1) + hr.dim(1) != in_channels_) {
    throw ShapeError("fusion forward: channel total " +
                     std::to_string(lr.dim(1) + hr.dim(1)) +
                     " does not match configured input channels " +
                     std::to_string(in_channels_));
  }

  NodeRef<T> up = upsample_bilinear(lr_input, s);
  NodeRef<T> h = concat_channels(up, hr_input);
  h = relu(conv2d(h, conv_param(store, prefix_ + ".head.w", false, update_u),
                  1, 1));
  for (int b = 0; b < n_blocks_; ++b) {
    h = resblock_forward(store, b, h, update_u);
  }
  return conv2d(h, conv_param(store, prefix_ + ".tail.w", false, update_u), 1,
                1);
}

template class FusionNetT<float>;
template class FusionNetT<double>;

}  // namespace srf
