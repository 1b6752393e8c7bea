#pragma once

// Three-stage self-regression: stage 1 fuses the raw observations, stages
// 2 and 3 fuse the current reconstruction residuals and add corrections.
// The estimated blur kernel and spectral response are produced once per
// pass and shared by all stages.

#include <string>
#include <vector>

#include "srf/autograd.hpp"
#include "srf/fusion_net.hpp"
#include "srf/observation.hpp"
#include "srf/param_store.hpp"
#include "srf/srfn_config.hpp"

namespace srf {

template <typename T>
struct StageTraceT {
  NodeRef<T> bhat;  // [k,k]
  NodeRef<T> rhat;  // [c,C]
  NodeRef<T> xhat1, yhat1, zhat1;
  NodeRef<T> xhat2, yhat2, zhat2;
  NodeRef<T> xhat, yhat, zhat;  // final stage
};

template <typename T>
struct LossNodesT {
  NodeRef<T> spa;    // final-stage spatial L1 term
  NodeRef<T> spe;    // final-stage spectral-angle term
  NodeRef<T> lc;     // local-consistency term (observation params only)
  NodeRef<T> total;  // spa + beta*spe + gamma*lc (+ optional stage aux)
};

struct LossRow {
  int iteration;
  double l_spa, l_spe, l_lc, total;
};

template <typename T>
struct TrainResultT {
  TensorT<T> xhat;  // fused cube [C,H,W]
  TensorT<T> bhat;  // learned kernel [k,k]
  TensorT<T> rhat;  // learned response [c,C]
  std::vector<LossRow> history;
  double final_loss = 0.0;
  int iterations_run = 0;
};

// Standalone loss builders (shapes [1,C,h,w] / [1,c,H,W] as produced by
// the forward pass).
template <typename T>
NodeRef<T> loss_spa(const NodeRef<T>& yhat, const NodeRef<T>& y,
                    const NodeRef<T>& zhat, const NodeRef<T>& z);
template <typename T>
NodeRef<T> loss_spe(const NodeRef<T>& yhat, const NodeRef<T>& y);
template <typename T>
NodeRef<T> loss_lc(const NodeRef<T>& y, const NodeRef<T>& z,
                   const NodeRef<T>& bhat, const NodeRef<T>& rhat, int s);

template <typename T>
class SelfRegressionT {
 public:
  SelfRegressionT(SrfnConfig cfg, int hsi_bands, int msi_bands);

  const SrfnConfig& config() const { return cfg_; }
  const ObservationNetsT<T>& observation() const { return obs_; }
  const FusionNetT<T>& stage_net(int i) const;
  int hsi_bands() const { return hsi_bands_; }
  int msi_bands() const { return msi_bands_; }

  // Registers every trainable parameter (three stage nets + observation).
  void init_params(ParamStoreT<T>& store, Rng& rng) const;

  // y: [1,C,h,w], z: [1,c,H,W] with H=h*s, W=w*s.
  StageTraceT<T> forward(ParamStoreT<T>& store, const NodeRef<T>& y,
                         const NodeRef<T>& z, bool update_u) const;

  LossNodesT<T> losses(const StageTraceT<T>& trace, const NodeRef<T>& y,
                       const NodeRef<T>& z) const;

  // Full training loop on [C,h,w] / [c,H,W] cubes. The store must be
  // empty; parameters are seeded from config().seed. Aborts with a
  // diagnostic naming the first non-finite tensor if the loss blows up.
  TrainResultT<T> train(ParamStoreT<T>& store, const TensorT<T>& y_cube,
                        const TensorT<T>& z_cube) const;

 private:
  void check_shapes(const TensorT<T>& y, const TensorT<T>& z) const;
  void check_finite(const StageTraceT<T>& trace, const LossNodesT<T>& loss,
                    int iteration) const;

  SrfnConfig cfg_;
  int hsi_bands_;
  int msi_bands_;
  ObservationNetsT<T> obs_;
  FusionNetT<T> f1_, f2_, f3_;
};

using SelfRegression = SelfRegressionT<double>;
using SelfRegressionF = SelfRegressionT<float>;

extern template class SelfRegressionT<float>;
extern template class SelfRegressionT<double>;

}  // namespace srf
