#include "srf/metrics.hpp"

#include <cmath>
#include <cstdio>

#include "srf/errors.hpp"

namespace srf {

namespace {

constexpr double kPsnrCap = 100.0;
constexpr double kDeg = 180.0 / 3.14159265358979323846264338327950288;

void require_cubes(const Tensor& pred, const Tensor& gt, const char* what) {
  if (pred.rank() != 3 || gt.rank() != 3 || !pred.same_shape(gt)) {
    throw ShapeError(std::string(what) + ": expected matching [C,H,W] cubes, got " +
                     shape_str(pred.shape()) + " and " + shape_str(gt.shape()));
  }
}

double band_mse(const Tensor& pred, const Tensor& gt, int band) {
  const int h = pred.dim(1), w = pred.dim(2);
  double acc = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double d = pred.at(band, y, x) - gt.at(band, y, x);
      acc += d * d;
    }
  }
  return acc / (static_cast<double>(h) * w);
}

// Valid-mode separable Gaussian filtering of one band plane.
void gauss_valid(const std::vector<double>& plane, int h, int w,
                 const double* g1d, int win, std::vector<double>& out) {
  const int ow = w - win + 1, oh = h - win + 1;
  std::vector<double> rows(static_cast<std::size_t>(h) * ow);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0;
      for (int t = 0; t < win; ++t) acc += g1d[t] * plane[y * w + x + t];
      rows[y * ow + x] = acc;
    }
  }
  out.assign(static_cast<std::size_t>(oh) * ow, 0.0);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0;
      for (int t = 0; t < win; ++t) acc += g1d[t] * rows[(y + t) * ow + x];
      out[y * ow + x] = acc;
    }
  }
}

}  // namespace

double psnr(const Tensor& pred, const Tensor& gt, double peak,
            std::vector<double>* per_band) {
  require_cubes(pred, gt, "psnr");
  const int bands = pred.dim(0);
  if (per_band) per_band->clear();
  double total = 0;
  for (int b = 0; b < bands; ++b) {
    const double mse = band_mse(pred, gt, b);
    double value = kPsnrCap;
    if (mse >= peak * peak * 1e-10) {
      value = 10.0 * std::log10(peak * peak / mse);
      if (value > kPsnrCap) value = kPsnrCap;
    }
    if (per_band) per_band->push_back(value);
    total += value;
  }
  return total / bands;
}

double ssim(const Tensor& pred, const Tensor& gt, double peak,
            std::vector<double>* per_band) {
  require_cubes(pred, gt, "ssim");
  const int bands = pred.dim(0), h = pred.dim(1), w = pred.dim(2);
  const int win = 11;
  if (h < win || w < win) {
    throw ShapeError("ssim: spatial extents " + shape_str(pred.shape()) +
                     " are below the 11x11 window");
  }

  double g1d[win];
  double gsum = 0;
  for (int t = 0; t < win; ++t) {
    const double d = t - (win - 1) / 2;
    g1d[t] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
    gsum += g1d[t];
  }
  for (int t = 0; t < win; ++t) g1d[t] /= gsum;

  const double c1 = (0.01 * peak) * (0.01 * peak);
  const double c2 = (0.03 * peak) * (0.03 * peak);

  if (per_band) per_band->clear();
  const std::size_t plane_n = static_cast<std::size_t>(h) * w;
  std::vector<double> a(plane_n), b(plane_n), aa(plane_n), bb(plane_n),
      ab(plane_n);
  std::vector<double> mu_a, mu_b, m_aa, m_bb, m_ab;
  double total = 0;
  for (int band = 0; band < bands; ++band) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double av = pred.at(band, y, x);
        const double bv = gt.at(band, y, x);
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        a[i] = av;
        b[i] = bv;
        aa[i] = av * av;
        bb[i] = bv * bv;
        ab[i] = av * bv;
      }
    }
    gauss_valid(a, h, w, g1d, win, mu_a);
    gauss_valid(b, h, w, g1d, win, mu_b);
    gauss_valid(aa, h, w, g1d, win, m_aa);
    gauss_valid(bb, h, w, g1d, win, m_bb);
    gauss_valid(ab, h, w, g1d, win, m_ab);

    double band_total = 0;
    for (std::size_t i = 0; i < mu_a.size(); ++i) {
      const double va = m_aa[i] - mu_a[i] * mu_a[i];
      const double vb = m_bb[i] - mu_b[i] * mu_b[i];
      const double cov = m_ab[i] - mu_a[i] * mu_b[i];
      const double num = (2 * mu_a[i] * mu_b[i] + c1) * (2 * cov + c2);
      const double den =
          (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (va + vb + c2);
      band_total += num / den;
    }
    const double band_mean = band_total / mu_a.size();
    if (per_band) per_band->push_back(band_mean);
    total += band_mean;
  }
  return total / bands;
}

double sam_metric(const Tensor& pred, const Tensor& gt) {
  require_cubes(pred, gt, "sam");
  const int bands = pred.dim(0), h = pred.dim(1), w = pred.dim(2);
  if (bands < 2) throw ShapeError("sam: need at least 2 bands");
  double total = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double dot = 0, np = 0, ng = 0;
      for (int b = 0; b < bands; ++b) {
        const double p = pred.at(b, y, x);
        const double g = gt.at(b, y, x);
        dot += p * g;
        np += p * p;
        ng += g * g;
      }
      double cosang = dot / (std::sqrt(np) * std::sqrt(ng) + 1e-9);
      if (cosang > 1.0 - 1e-7) cosang = 1.0 - 1e-7;
      if (cosang < -1.0 + 1e-7) cosang = -1.0 + 1e-7;
      total += std::acos(cosang);
    }
  }
  return total / (static_cast<double>(h) * w) * kDeg;
}

double ergas(const Tensor& pred, const Tensor& gt, int s) {
  require_cubes(pred, gt, "ergas");
  if (s < 1) throw ShapeError("ergas: scale must be >= 1");
  const int bands = pred.dim(0), h = pred.dim(1), w = pred.dim(2);
  double acc = 0;
  for (int b = 0; b < bands; ++b) {
    double mean = 0;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) mean += gt.at(b, y, x);
    mean /= static_cast<double>(h) * w;
    if (std::abs(mean) < 1e-12) {
      throw ShapeError("ergas: reference band " + std::to_string(b) +
                       " has zero mean");
    }
    acc += band_mse(pred, gt, b) / (mean * mean);
  }
  return 100.0 / s * std::sqrt(acc / bands);
}

MetricsReport evaluate(const Tensor& pred, const Tensor& gt, int s,
                       double peak) {
  MetricsReport r;
  r.psnr = psnr(pred, gt, peak, &r.per_band_psnr);
  r.ssim = ssim(pred, gt, peak, &r.per_band_ssim);
  r.sam = sam_metric(pred, gt);
  r.ergas = ergas(pred, gt, s);
  return r;
}

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string MetricsReport::to_kv() const {
  std::string out;
  out += "psnr=" + fmt6(psnr) + "\n";
  out += "ssim=" + fmt6(ssim) + "\n";
  out += "sam=" + fmt6(sam) + "\n";
  out += "ergas=" + fmt6(ergas) + "\n";
  return out;
}

nlohmann::json MetricsReport::to_json() const {
  return nlohmann::json{{"psnr", psnr},
                        {"ssim", ssim},
                        {"sam", sam},
                        {"ergas", ergas},
                        {"per_band_psnr", per_band_psnr},
                        {"per_band_ssim", per_band_ssim}};
}

MetricsReport MetricsReport::from_json(const nlohmann::json& j) {
  MetricsReport r;
  r.psnr = j.at("psnr").get<double>();
  r.ssim = j.at("ssim").get<double>();
  r.sam = j.at("sam").get<double>();
  r.ergas = j.at("ergas").get<double>();
  if (j.contains("per_band_psnr"))
    r.per_band_psnr = j.at("per_band_psnr").get<std::vector<double>>();
  if (j.contains("per_band_ssim"))
    r.per_band_ssim = j.at("per_band_ssim").get<std::vector<double>>();
  return r;
}

}  // namespace srf
