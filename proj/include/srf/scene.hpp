#pragma once

// Synthetic scene generation: a smooth nonnegative ground-truth cube built
// from endmember mixtures, a Gaussian blur kernel, an overlapping
// Gaussian-profile spectral response, and the two simulated observations.

#include <cstdint>

#include "srf/tensor.hpp"

namespace srf {

struct SyntheticScene {
  Tensor x;    // ground truth [C,H,W], values in [0,1]
  Tensor y;    // LR observation [C,H/s,W/s]
  Tensor z;    // spectral observation [c,H,W]
  Tensor psf;  // true blur kernel [k,k]
  Tensor srf;  // true response matrix [c,C], rows on the simplex
  int scale = 1;
  std::uint64_t seed = 0;
};

SyntheticScene generate_scene(int width, int height, int bands, int msi_bands,
                              int s, int psf_size, double psf_sigma,
                              std::uint64_t seed);

}  // namespace srf
