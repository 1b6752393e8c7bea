#include "srf/self_regression.hpp"

#include <cmath>
#include <utility>

#include "srf/errors.hpp"

namespace srf {

template <typename T>
NodeRef<T> loss_spa(const NodeRef<T>& yhat, const NodeRef<T>& y,
                    const NodeRef<T>& zhat, const NodeRef<T>& z) {
  return add(mean_abs(sub(yhat, y)), mean_abs(sub(zhat, z)));
}

template <typename T>
NodeRef<T> loss_spe(const NodeRef<T>& yhat, const NodeRef<T>& y) {
  NodeRef<T> dot = channel_dot(yhat, y);
  NodeRef<T> denom = add_scalar(mul(channel_norm(yhat), channel_norm(y)),
                                static_cast<T>(1e-9));
  return mean(arccos_clamped(div(dot, denom)));
}

template <typename T>
NodeRef<T> loss_lc(const NodeRef<T>& y, const NodeRef<T>& z,
                   const NodeRef<T>& bhat, const NodeRef<T>& rhat, int s) {
  NodeRef<T> ry = degrade_spectral_node(y, rhat);
  NodeRef<T> zbs = degrade_spatial_node(z, bhat, s);
  return mean_abs(sub(ry, zbs));
}

template <typename T>
SelfRegressionT<T>::SelfRegressionT(SrfnConfig cfg, int hsi_bands,
                                    int msi_bands)
    : cfg_(std::move(cfg)),
      hsi_bands_(hsi_bands),
      msi_bands_(msi_bands),
      obs_(cfg_.kernel_size, msi_bands, hsi_bands, cfg_.obs_fc_depth,
           cfg_.use_softmax),
      f1_("f1", hsi_bands + msi_bands, hsi_bands, cfg_.features, cfg_.n_blocks,
          static_cast<T>(cfg_.lambda_sn), cfg_.use_sn, cfg_.sn_iters,
          cfg_.sn_detach_sigma),
      f2_("f2", hsi_bands + msi_bands, hsi_bands, cfg_.features, cfg_.n_blocks,
          static_cast<T>(cfg_.lambda_sn), cfg_.use_sn, cfg_.sn_iters,
          cfg_.sn_detach_sigma),
      f3_("f3", hsi_bands + msi_bands, hsi_bands, cfg_.features, cfg_.n_blocks,
          static_cast<T>(cfg_.lambda_sn), cfg_.use_sn, cfg_.sn_iters,
          cfg_.sn_detach_sigma) {
  cfg_.validate();
  if (hsi_bands < 2) throw ConfigError("need at least 2 spectral bands");
  if (msi_bands < 1) throw ConfigError("need at least 1 observation band");
  if (msi_bands >= hsi_bands) {
    throw ConfigError("observation band count must be below cube band count");
  }
}

template <typename T>
const FusionNetT<T>& SelfRegressionT<T>::stage_net(int i) const {
  if (i == 1) return f1_;
  if (i == 2) return f2_;
  if (i == 3) return f3_;
  throw ConfigError("stage index must be 1, 2 or 3");
}

template <typename T>
void SelfRegressionT<T>::init_params(ParamStoreT<T>& store, Rng& rng) const {
  f1_.init_params(store, rng);
  f2_.init_params(store, rng);
  f3_.init_params(store, rng);
  obs_.init_params(store, rng);
}

template <typename T>
void SelfRegressionT<T>::check_shapes(const TensorT<T>& y,
                                      const TensorT<T>& z) const {
  const int s = cfg_.scale;
  if (y.rank() != 4 || z.rank() != 4 || y.dim(0) != 1 || z.dim(0) != 1) {
    throw ShapeError("self-regression: expected [1,C,h,w] and [1,c,H,W], got " +
                     shape_str(y.shape()) + " and " + shape_str(z.shape()));
  }
  if (y.dim(1) != hsi_bands_ || z.dim(1) != msi_bands_) {
    throw ShapeError("self-regression: band counts " + shape_str(y.shape()) +
                     "/" + shape_str(z.shape()) + " do not match model (" +
                     std::to_string(hsi_bands_) + "," +
                     std::to_string(msi_bands_) + ")");
  }
  if (z.dim(2) != y.dim(2) * s || z.dim(3) != y.dim(3) * s) {
    throw ShapeError("self-regression: HR extents " + shape_str(z.shape()) +
                     " are not " + std::to_string(s) + "x the LR extents " +
                     shape_str(y.shape()));
  }
}

template <typename T>
StageTraceT<T> SelfRegressionT<T>::forward(ParamStoreT<T>& store,
                                           const NodeRef<T>& y,
                                           const NodeRef<T>& z,
                                           bool update_u) const {
  check_shapes(y->value, z->value);
  const int s = cfg_.scale;

  StageTraceT<T> t;
  t.bhat = obs_.psf_forward(store);
  t.rhat = obs_.srf_forward(store);

  t.xhat1 = f1_.forward(store, y, z, s, update_u);
  t.yhat1 = degrade_spatial_node(t.xhat1, t.bhat, s);
  t.zhat1 = degrade_spectral_node(t.xhat1, t.rhat);

  NodeRef<T> dx2 =
      f2_.forward(store, sub(y, t.yhat1), sub(z, t.zhat1), s, update_u);
  t.xhat2 = add(t.xhat1, dx2);
  t.yhat2 = degrade_spatial_node(t.xhat2, t.bhat, s);
  t.zhat2 = degrade_spectral_node(t.xhat2, t.rhat);

  NodeRef<T> dx3 =
      f3_.forward(store, sub(y, t.yhat2), sub(z, t.zhat2), s, update_u);
  t.xhat = add(t.xhat2, dx3);
  t.yhat = degrade_spatial_node(t.xhat, t.bhat, s);
  t.zhat = degrade_spectral_node(t.xhat, t.rhat);
  return t;
}

template <typename T>
LossNodesT<T> SelfRegressionT<T>::losses(const StageTraceT<T>& trace,
                                         const NodeRef<T>& y,
                                         const NodeRef<T>& z) const {
  LossNodesT<T> l;
  l.spa = loss_spa(trace.yhat, y, trace.zhat, z);
  l.spe = loss_spe(trace.yhat, y);
  l.lc = loss_lc(y, z, trace.bhat, trace.rhat, cfg_.scale);
  l.total = add(add(l.spa, scale(l.spe, static_cast<T>(cfg_.beta))),
                scale(l.lc, static_cast<T>(cfg_.gamma)));
  if (cfg_.per_stage_losses) {
    NodeRef<T> aux1 = add(loss_spa(trace.yhat1, y, trace.zhat1, z),
                          scale(loss_spe(trace.yhat1, y),
                                static_cast<T>(cfg_.beta)));
    NodeRef<T> aux2 = add(loss_spa(trace.yhat2, y, trace.zhat2, z),
                          scale(loss_spe(trace.yhat2, y),
                                static_cast<T>(cfg_.beta)));
    l.total = add(l.total, add(aux1, aux2));
  }
  return l;
}

template <typename T>
void SelfRegressionT<T>::check_finite(const StageTraceT<T>& trace,
                                      const LossNodesT<T>& loss,
                                      int iteration) const {
  const std::pair<const char*, const NodeRef<T>*> named[] = {
      {"estimated_kernel", &trace.bhat},  {"estimated_response", &trace.rhat},
      {"stage1_cube", &trace.xhat1},      {"stage1_lr", &trace.yhat1},
      {"stage1_hr", &trace.zhat1},        {"stage2_cube", &trace.xhat2},
      {"stage2_lr", &trace.yhat2},        {"stage2_hr", &trace.zhat2},
      {"fused_cube", &trace.xhat},        {"fused_lr", &trace.yhat},
      {"fused_hr", &trace.zhat},          {"loss_spa", &loss.spa},
      {"loss_spe", &loss.spe},            {"loss_lc", &loss.lc},
      {"loss_total", &loss.total},
  };
  for (const auto& [name, node] : named) {
    if (!(*node)->value.all_finite()) {
      throw TrainError("non-finite values in " + std::string(name) +
                       " at iteration " + std::to_string(iteration));
    }
  }
}

template <typename T>
TrainResultT<T> SelfRegressionT<T>::train(ParamStoreT<T>& store,
                                          const TensorT<T>& y_cube,
                                          const TensorT<T>& z_cube) const {
  if (y_cube.rank() != 3 || z_cube.rank() != 3) {
    throw ShapeError("train: expected [C,h,w] and [c,H,W] cubes, got " +
                     shape_str(y_cube.shape()) + " and " +
                     shape_str(z_cube.shape()));
  }
  if (store.size() != 0) {
    throw ConfigError("train: parameter store must start empty");
  }
  TensorT<T> y4 = y_cube.reshaped(
      {1, y_cube.dim(0), y_cube.dim(1), y_cube.dim(2)});
  TensorT<T> z4 = z_cube.reshaped(
      {1, z_cube.dim(0), z_cube.dim(1), z_cube.dim(2)});
  check_shapes(y4, z4);

  Rng rng(cfg_.seed);
  init_params(store, rng);

  NodeRef<T> y = make_constant(std::move(y4));
  NodeRef<T> z = make_constant(std::move(z4));

  TrainResultT<T> result;
  double lr = cfg_.lr;
  for (int it = 1; it <= cfg_.iterations; ++it) {
    if (cfg_.lr_halving_interval > 0 && it > 1 &&
        (it - 1) % cfg_.lr_halving_interval == 0) {
      lr *= 0.5;
    }
    store.zero_grads();
    StageTraceT<T> trace = forward(store, y, z, true);
    LossNodesT<T> l = losses(trace, y, z);
    check_finite(trace, l, it);
    result.history.push_back({it, static_cast<double>(l.spa->value[0]),
                              static_cast<double>(l.spe->value[0]),
                              static_cast<double>(l.lc->value[0]),
                              static_cast<double>(l.total->value[0])});
    backward(l.total);
    if (cfg_.alternating_updates) {
      const bool fusion_turn = (it % 2 == 1);
      store.adam_step(static_cast<T>(lr), T(0.9), T(0.999), T(1e-8),
                      [fusion_turn](const std::string& name) {
                        const bool is_obs =
                            ObservationNetsT<T>::owns_param(name);
                        return fusion_turn ? !is_obs : is_obs;
                      });
      store.zero_grads();  // drop the skipped group's gradients
    } else {
      store.adam_step(static_cast<T>(lr), T(0.9), T(0.999), T(1e-8));
    }
    result.iterations_run = it;
  }

  StageTraceT<T> trace = forward(store, y, z, false);
  LossNodesT<T> l = losses(trace, y, z);
  check_finite(trace, l, cfg_.iterations + 1);
  const TensorT<T>& xv = trace.xhat->value;
  result.xhat = xv.reshaped({xv.dim(1), xv.dim(2), xv.dim(3)});
  result.bhat = trace.bhat->value;
  result.rhat = trace.rhat->value;
  result.final_loss = static_cast<double>(l.total->value[0]);
  return result;
}

#define SRF_INSTANTIATE_SELFREG(T)                                         \
  template NodeRef<T> loss_spa<T>(const NodeRef<T>&, const NodeRef<T>&,    \
                                  const NodeRef<T>&, const NodeRef<T>&);   \
  template NodeRef<T> loss_spe<T>(const NodeRef<T>&, const NodeRef<T>&);   \
  template NodeRef<T> loss_lc<T>(const NodeRef<T>&, const NodeRef<T>&,     \
                                 const NodeRef<T>&, const NodeRef<T>&, int); \
  template class SelfRegressionT<T>;

SRF_INSTANTIATE_SELFREG(float)
SRF_INSTANTIATE_SELFREG(double)

#undef SRF_INSTANTIATE_SELFREG

}  // namespace srf
