#include "srf/scene.hpp"

#include <cmath>
#include <vector>

#include "srf/errors.hpp"
#include "srf/observation.hpp"
#include "srf/rng.hpp"

namespace srf {

namespace {

constexpr int kEndmembers = 3;
constexpr int kBumps = 3;
constexpr int kFineBumps = 10;

}  // namespace

SyntheticScene generate_scene(int width, int height, int bands, int msi_bands,
                              int s, int psf_size, double psf_sigma,
                              std::uint64_t seed) {
  if (width < 1 || height < 1) throw ShapeError("scene: extents must be >= 1");
  if (s < 1) throw ShapeError("scene: scale must be >= 1");
  if (width % s != 0 || height % s != 0) {
    throw ShapeError("scene: extents " + std::to_string(width) + "x" +
                     std::to_string(height) + " are not divisible by scale " +
                     std::to_string(s));
  }
  if (msi_bands < 1 || bands <= msi_bands) {
    throw ShapeError("scene: need bands > msi_bands >= 1");
  }

  Rng rng(seed);

  // Smooth random endmember spectra: sums of a few Gaussian bumps along
  // the band axis.
  std::vector<std::vector<double>> spectra(kEndmembers,
                                           std::vector<double>(bands, 0.0));
  for (auto& spec : spectra) {
    for (int j = 0; j < kBumps; ++j) {
      const double amp = rng.uniform(0.2, 1.0);
      const double center = rng.uniform(0.0, bands - 1.0);
      const double sig = rng.uniform(bands / 8.0 + 0.5, bands / 3.0 + 0.5);
      for (int b = 0; b < bands; ++b) {
        const double d = b - center;
        spec[b] += amp * std::exp(-d * d / (2 * sig * sig));
      }
    }
  }

  // Smooth abundance maps, normalized per pixel to sum 1.
  std::vector<std::vector<double>> maps(
      kEndmembers, std::vector<double>(static_cast<std::size_t>(height) * width,
                                       0.0));
  for (auto& m : maps) {
    // broad structures plus fine-scale detail the downsampling destroys
    // (the detail survives in the HR observation, making fusion nontrivial)
    for (int j = 0; j < kBumps + kFineBumps; ++j) {
      const bool fine = j >= kBumps;
      const double amp =
          fine ? rng.uniform(0.5, 1.5) : rng.uniform(0.3, 1.0);
      const double cy = rng.uniform(0.0, height - 1.0);
      const double cx = rng.uniform(0.0, width - 1.0);
      const double sig =
          fine ? rng.uniform(0.6, 1.5)
               : rng.uniform(std::min(width, height) / 6.0 + 0.5,
                             std::min(width, height) / 2.0 + 0.5);
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          const double d2 = (y - cy) * (y - cy) + (x - cx) * (x - cx);
          m[static_cast<std::size_t>(y) * width + x] +=
              amp * std::exp(-d2 / (2 * sig * sig));
        }
      }
    }
  }

  SyntheticScene scene;
  scene.scale = s;
  scene.seed = seed;
  scene.x = Tensor({bands, height, width});
  double peak = 0.0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t pi = static_cast<std::size_t>(y) * width + x;
      double total = 0;
      for (int e = 0; e < kEndmembers; ++e) total += maps[e][pi];
      for (int b = 0; b < bands; ++b) {
        double v = 0;
        for (int e = 0; e < kEndmembers; ++e)
          v += maps[e][pi] / (total + 1e-12) * spectra[e][b];
        scene.x.at(b, y, x) = v;
        peak = std::max(peak, v);
      }
    }
  }
  for (std::int64_t i = 0; i < scene.x.numel(); ++i) scene.x[i] /= peak;

  // Overlapping Gaussian-profile response rows, renormalized to sum 1.
  scene.srf = Tensor({msi_bands, bands});
  const double rsig = static_cast<double>(bands) / (2.0 * msi_bands);
  for (int r = 0; r < msi_bands; ++r) {
    const double center = (r + 0.5) * bands / msi_bands - 0.5;
    double total = 0;
    for (int b = 0; b < bands; ++b) {
      const double d = b - center;
      const double v = std::exp(-d * d / (2 * rsig * rsig));
      scene.srf.at(r, b) = v;
      total += v;
    }
    for (int b = 0; b < bands; ++b) scene.srf.at(r, b) /= total;
  }

  scene.psf = gaussian_psf(psf_size, psf_sigma);
  scene.y = degrade_spatial(scene.x, scene.psf, s);
  scene.z = degrade_spectral(scene.x, scene.srf);
  return scene;
}

}  // namespace srf
