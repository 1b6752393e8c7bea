#pragma once

// Quality metrics for fused cubes, all on [C,H,W] double tensors.

#include <string>
#include <vector>

#include "json.hpp"
#include "srf/tensor.hpp"

namespace srf {

struct MetricsReport {
  double psnr = 0.0;   // dB, capped at 100
  double ssim = 0.0;   // [-1, 1]
  double sam = 0.0;    // degrees
  double ergas = 0.0;  // >= 0
  std::vector<double> per_band_psnr;
  std::vector<double> per_band_ssim;

  // Flat "metric=value" lines, six significant digits.
  std::string to_kv() const;
  nlohmann::json to_json() const;
  static MetricsReport from_json(const nlohmann::json& j);
};

// Per-band 10*log10(peak^2/MSE) averaged over bands; bands with
// MSE < peak^2 * 1e-10 are reported as the 100 dB cap.
double psnr(const Tensor& pred, const Tensor& gt, double peak = 1.0,
            std::vector<double>* per_band = nullptr);

// Mean single-scale SSIM over valid 11x11 Gaussian windows (sigma 1.5),
// averaged over bands; C1=(0.01*peak)^2, C2=(0.03*peak)^2.
double ssim(const Tensor& pred, const Tensor& gt, double peak = 1.0,
            std::vector<double>* per_band = nullptr);

// Mean spectral angle between per-pixel spectra, in degrees.
double sam_metric(const Tensor& pred, const Tensor& gt);

// (100/s) * sqrt(mean over bands of MSE_b / mean_b^2).
double ergas(const Tensor& pred, const Tensor& gt, int s);

MetricsReport evaluate(const Tensor& pred, const Tensor& gt, int s,
                       double peak = 1.0);

}  // namespace srf
