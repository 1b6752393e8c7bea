#pragma once

// Observation model: the ground-truth simulator (blur + decimate, spectral
// mixing) and the two small learned networks that produce the estimated
// blur kernel and spectral response matrix under simplex constraints.

#include "srf/autograd.hpp"
#include "srf/param_store.hpp"
#include "srf/rng.hpp"
#include "srf/tensor.hpp"

namespace srf {

// Isotropic Gaussian kernel [size, size], centered at (size-1)/2,
// normalized to sum 1.
template <typename T>
TensorT<T> gaussian_psf(int size, T sigma);

// Value-level simulator on [C,H,W] cubes.
template <typename T>
TensorT<T> degrade_spatial(const TensorT<T>& cube, const TensorT<T>& psf,
                           int s);
template <typename T>
TensorT<T> degrade_spectral(const TensorT<T>& cube, const TensorT<T>& srf);

// Graph-level versions on [1,C,H,W] nodes; psf is [k,k], srf is [c,C].
template <typename T>
NodeRef<T> degrade_spatial_node(const NodeRef<T>& x, const NodeRef<T>& psf,
                                int s);
template <typename T>
NodeRef<T> degrade_spectral_node(const NodeRef<T>& x, const NodeRef<T>& srf);

// Learned observation networks. Each maps a free latent through a small
// fully-connected stack and a softmax, so non-negativity and sum-to-one
// hold by construction. `use_softmax=false` drops the constraint (ablation).
template <typename T>
class ObservationNetsT {
 public:
  ObservationNetsT(int kernel_size, int msi_bands, int hsi_bands,
                   int fc_depth = 1, bool use_softmax = true);

  // Registers latents and FC parameters under the "obs." prefix.
  void init_params(ParamStoreT<T>& store, Rng& rng) const;

  // Estimated blur kernel [k,k].
  NodeRef<T> psf_forward(ParamStoreT<T>& store) const;
  // Estimated spectral response [c,C], one row per MSI band.
  NodeRef<T> srf_forward(ParamStoreT<T>& store) const;

  int kernel_size() const { return kernel_size_; }
  int msi_bands() const { return msi_bands_; }
  int hsi_bands() const { return hsi_bands_; }

  static bool owns_param(const std::string& name) {
    return name.rfind("obs.", 0) == 0;
  }

 private:
  int kernel_size_;
  int msi_bands_;
  int hsi_bands_;
  int fc_depth_;
  bool use_softmax_;
};

using ObservationNets = ObservationNetsT<double>;
using ObservationNetsF = ObservationNetsT<float>;

extern template class ObservationNetsT<float>;
extern template class ObservationNetsT<double>;

}  // namespace srf
