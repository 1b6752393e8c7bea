#include "srf/observation.hpp"

#include <cmath>
#include <string>

#include "srf/errors.hpp"
#include "srf/tensor_ops.hpp"

namespace srf {

template <typename T>
TensorT<T> gaussian_psf(int size, T sigma) {
  if (size < 1) throw ShapeError("gaussian_psf: size must be >= 1");
  if (!(sigma > T(0))) throw ShapeError("gaussian_psf: sigma must be positive");
  TensorT<T> k({size, size});
  const T center = static_cast<T>(size - 1) / T(2);
  T total = 0;
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      const T di = static_cast<T>(i) - center;
      const T dj = static_cast<T>(j) - center;
      const T w = std::exp(-(di * di + dj * dj) / (T(2) * sigma * sigma));
      k.at(i, j) = w;
      total += w;
    }
  }
  for (std::int64_t i = 0; i < k.numel(); ++i) k[i] /= total;
  return k;
}

template <typename T>
TensorT<T> degrade_spatial(const TensorT<T>& cube, const TensorT<T>& psf,
                           int s) {
  if (cube.rank() != 3) {
    throw ShapeError("degrade_spatial: expected [C,H,W] cube, got " +
                     shape_str(cube.shape()));
  }
  const int c = cube.dim(0), h = cube.dim(1), w = cube.dim(2);
  TensorT<T> x4 = cube.reshaped({1, c, h, w});
  TensorT<T> blurred = blur_symmetric(x4, psf);
  TensorT<T> low = decimate(blurred, s);
  return low.reshaped({c, h / s, w / s});
}

template <typename T>
TensorT<T> degrade_spectral(const TensorT<T>& cube, const TensorT<T>& srf) {
  if (cube.rank() != 3) {
    throw ShapeError("degrade_spectral: expected [C,H,W] cube, got " +
                     shape_str(cube.shape()));
  }
  if (srf.rank() != 2 || srf.dim(1) != cube.dim(0)) {
    throw ShapeError("degrade_spectral: response matrix " +
                     shape_str(srf.shape()) + " does not match cube bands " +
                     shape_str(cube.shape()));
  }
  const int bands = cube.dim(0), h = cube.dim(1), w = cube.dim(2);
  TensorT<T> x2d = cube.reshaped({bands, h * w});
  TensorT<T> z2d = matmul(srf, x2d);
  return z2d.reshaped({srf.dim(0), h, w});
}

template <typename T>
NodeRef<T> degrade_spatial_node(const NodeRef<T>& x, const NodeRef<T>& psf,
                                int s) {
  return decimate(blur_symmetric(x, psf), s);
}

template <typename T>
NodeRef<T> degrade_spectral_node(const NodeRef<T>& x, const NodeRef<T>& srf) {
  const int bands = x->value.dim(1), h = x->value.dim(2), w = x->value.dim(3);
  if (srf->value.dim(1) != bands) {
    throw ShapeError("degrade_spectral: response matrix " +
                     shape_str(srf->value.shape()) +
                     " does not match cube bands " +
                     shape_str(x->value.shape()));
  }
  NodeRef<T> x2d = reshape(x, {bands, h * w});
  NodeRef<T> z2d = matmul(srf, x2d);
  return reshape(z2d, {1, srf->value.dim(0), h, w});
}

template <typename T>
ObservationNetsT<T>::ObservationNetsT(int kernel_size, int msi_bands,
                                      int hsi_bands, int fc_depth,
                                      bool use_softmax)
    : kernel_size_(kernel_size),
      msi_bands_(msi_bands),
      hsi_bands_(hsi_bands),
      fc_depth_(fc_depth),
      use_softmax_(use_softmax) {
  if (kernel_size < 1) throw ConfigError("observation: kernel_size must be >= 1");
  if (msi_bands < 1 || hsi_bands < 1) {
    throw ConfigError("observation: band counts must be >= 1");
  }
  if (fc_depth < 1) throw ConfigError("observation: fc_depth must be >= 1");
}

namespace {

template <typename T>
TensorT<T> he_uniform(int rows, int cols, Rng& rng) {
  TensorT<T> w({rows, cols});
  const double bound = std::sqrt(6.0 / rows);
  for (std::int64_t i = 0; i < w.numel(); ++i)
    w[i] = static_cast<T>(rng.uniform(-bound, bound));
  return w;
}

}  // namespace

template <typename T>
void ObservationNetsT<T>::init_params(ParamStoreT<T>& store, Rng& rng) const {
  const int kk = kernel_size_ * kernel_size_;
  TensorT<T> lb({kk});
  for (int i = 0; i < kk; ++i) lb[i] = static_cast<T>(rng.normal());
  store.add("obs.latent_b", std::move(lb));
  for (int d = 0; d < fc_depth_; ++d) {
    const std::string p = "obs.b_fc" + std::to_string(d);
    store.add(p + ".w", he_uniform<T>(kk, kk, rng));
    store.add(p + ".bias", TensorT<T>({kk}));
  }

  TensorT<T> lr({msi_bands_, hsi_bands_});
  for (std::int64_t i = 0; i < lr.numel(); ++i)
    lr[i] = static_cast<T>(rng.normal());
  store.add("obs.latent_r", std::move(lr));
  for (int d = 0; d < fc_depth_; ++d) {
    const std::string p = "obs.r_fc" + std::to_string(d);
    store.add(p + ".w", he_uniform<T>(hsi_bands_, hsi_bands_, rng));
    store.add(p + ".bias", TensorT<T>({hsi_bands_}));
  }
}

template <typename T>
NodeRef<T> ObservationNetsT<T>::psf_forward(ParamStoreT<T>& store) const {
  const int kk = kernel_size_ * kernel_size_;
  NodeRef<T> h = reshape(store.get("obs.latent_b"), {1, kk});
  for (int d = 0; d < fc_depth_; ++d) {
    const std::string p = "obs.b_fc" + std::to_string(d);
    if (d > 0) h = relu(h);
    h = add_rowvec(matmul(h, store.get(p + ".w")), store.get(p + ".bias"));
  }
  if (use_softmax_) h = softmax_flat(h);
  return reshape(h, {kernel_size_, kernel_size_});
}

template <typename T>
NodeRef<T> ObservationNetsT<T>::srf_forward(ParamStoreT<T>& store) const {
  NodeRef<T> h = store.get("obs.latent_r");
  for (int d = 0; d < fc_depth_; ++d) {
    const std::string p = "obs.r_fc" + std::to_string(d);
    if (d > 0) h = relu(h);
    h = add_rowvec(matmul(h, store.get(p + ".w")), store.get(p + ".bias"));
  }
  if (use_softmax_) h = softmax_rows(h);
  return h;
}

template class ObservationNetsT<float>;
template class ObservationNetsT<double>;

#define SRF_INSTANTIATE_OBS(T)                                              \
  template TensorT<T> gaussian_psf<T>(int, T);                              \
  template TensorT<T> degrade_spatial<T>(const TensorT<T>&,                 \
                                         const TensorT<T>&, int);           \
  template TensorT<T> degrade_spectral<T>(const TensorT<T>&,                \
                                          const TensorT<T>&);               \
  template NodeRef<T> degrade_spatial_node<T>(const NodeRef<T>&,            \
                                              const NodeRef<T>&, int);      \
  template NodeRef<T> degrade_spectral_node<T>(const NodeRef<T>&,           \
                                               const NodeRef<T>&);

SRF_INSTANTIATE_OBS(float)
SRF_INSTANTIATE_OBS(double)

#undef SRF_INSTANTIATE_OBS

}  // namespace srf
