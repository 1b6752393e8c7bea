#include "srf/tensor_ops.hpp"

#include <algorithm>
#include <cmath>

namespace srf {

namespace {

template <typename T>
void require_rank(const TensorT<T>& t, int rank, const char* what) {
  if (t.rank() != rank) {
    throw ShapeError(std::string(what) + ": expected rank " +
                     std::to_string(rank) + ", got shape " +
                     shape_str(t.shape()));
  }
}

}  // namespace

template <typename T>
TensorT<T> conv2d(const TensorT<T>& input, const TensorT<T>& kernel, int stride,
                  int padding) {
  require_rank(input, 4, "conv2d input");
  require_rank(kernel, 4, "conv2d kernel");
  if (stride < 1) throw ShapeError("conv2d: stride must be positive");
  if (padding < 0) throw ShapeError("conv2d: padding must be non-negative");
  const int b = input.dim(0), c_in = input.dim(1), h = input.dim(2),
            w = input.dim(3);
  const int c_out = kernel.dim(0), kc = kernel.dim(1), kh = kernel.dim(2),
            kw = kernel.dim(3);
  if (kc != c_in) {
    throw ShapeError("conv2d: kernel expects " + std::to_string(kc) +
                     " input channels but input " + shape_str(input.shape()) +
                     " has " + std::to_string(c_in));
  }
  if (kh > h + 2 * padding || kw > w + 2 * padding) {
    throw ShapeError("conv2d: kernel " + shape_str(kernel.shape()) +
                     " larger than padded input " + shape_str(input.shape()) +
                     " with padding " + std::to_string(padding));
  }
  const int oh = (h + 2 * padding - kh) / stride + 1;
  const int ow = (w + 2 * padding - kw) / stride + 1;

  TensorT<T> out({b, c_out, oh, ow});
  const T* in = input.data();
  const T* ker = kernel.data();
  T* o = out.data();
  for (int bi = 0; bi < b; ++bi) {
    for (int co = 0; co < c_out; ++co) {
      for (int oy = 0; oy < oh; ++oy) {
        for (int ox = 0; ox < ow; ++ox) {
          T acc = 0;
          for (int ci = 0; ci < c_in; ++ci) {
            const T* in_ch = in + ((static_cast<std::int64_t>(bi) * c_in + ci) * h) * w;
            const T* k_ch =
                ker + ((static_cast<std::int64_t>(co) * c_in + ci) * kh) * kw;
            for (int ky = 0; ky < kh; ++ky) {
              const int iy = oy * stride + ky - padding;
              if (iy < 0 || iy >= h) continue;
              for (int kx = 0; kx < kw; ++kx) {
                const int ix = ox * stride + kx - padding;
                if (ix < 0 || ix >= w) continue;
                acc += in_ch[static_cast<std::int64_t>(iy) * w + ix] *
                       k_ch[ky * kw + kx];
              }
            }
          }
          o[((static_cast<std::int64_t>(bi) * c_out + co) * oh + oy) * ow + ox] = acc;
        }
      }
    }
  }
  return out;
}

template <typename T>
void conv2d_backward(const TensorT<T>& input, const TensorT<T>& kernel,
                     int stride, int padding, const TensorT<T>& grad_out,
                     TensorT<T>* grad_input, TensorT<T>* grad_kernel) {
  const int b = input.dim(0), c_in = input.dim(1), h = input.dim(2),
            w = input.dim(3);
  const int c_out = kernel.dim(0), kh = kernel.dim(2), kw = kernel.dim(3);
  const int oh = grad_out.dim(2), ow = grad_out.dim(3);

  const T* in = input.data();
  const T* ker = kernel.data();
  const T* go = grad_out.data();
  for (int bi = 0; bi < b; ++bi) {
    for (int co = 0; co < c_out; ++co) {
      for (int oy = 0; oy < oh; ++oy) {
        for (int ox = 0; ox < ow; ++ox) {
          const T g =
              go[((static_cast<std::int64_t>(bi) * c_out + co) * oh + oy) * ow + ox];
          if (g == T(0)) continue;
          for (int ci = 0; ci < c_in; ++ci) {
            const std::int64_t in_base =
                ((static_cast<std::int64_t>(bi) * c_in + ci) * h) * w;
            const std::int64_t k_base =
                ((static_cast<std::int64_t>(co) * c_in + ci) * kh) * kw;
            for (int ky = 0; ky < kh; ++ky) {
              const int iy = oy * stride + ky - padding;
              if (iy < 0 || iy >= h) continue;
              for (int kx = 0; kx < kw; ++kx) {
                const int ix = ox * stride + kx - padding;
                if (ix < 0 || ix >= w) continue;
                const std::int64_t ii = in_base + static_cast<std::int64_t>(iy) * w + ix;
                const std::int64_t kk = k_base + ky * kw + kx;
                if (grad_input) grad_input->data()[ii] += g * ker[kk];
                if (grad_kernel) grad_kernel->data()[kk] += g * in[ii];
              }
            }
          }
        }
      }
    }
  }
}

template <typename T>
TensorT<T> upsample_bilinear(const TensorT<T>& input, int factor) {
  require_rank(input, 4, "upsample_bilinear input");
  if (factor < 1) throw ShapeError("upsample_bilinear: factor must be >= 1");
  const int b = input.dim(0), c = input.dim(1), h = input.dim(2),
            w = input.dim(3);
  const int oh = h * factor, ow = w * factor;
  TensorT<T> out({b, c, oh, ow});

  // precompute 1-D sampling taps (align-corners=false, edge clamped)
  std::vector<int> y0(oh), y1(oh);
  std::vector<T> wy(oh);
  for (int oy = 0; oy < oh; ++oy) {
    const double src = (oy + 0.5) / factor - 0.5;
    const int lo = static_cast<int>(std::floor(src));
    y0[oy] = std::clamp(lo, 0, h - 1);
    y1[oy] = std::clamp(lo + 1, 0, h - 1);
    wy[oy] = static_cast<T>(src - lo);
  }
  std::vector<int> x0(ow), x1(ow);
  std::vector<T> wx(ow);
  for (int ox = 0; ox < ow; ++ox) {
    const double src = (ox + 0.5) / factor - 0.5;
    const int lo = static_cast<int>(std::floor(src));
    x0[ox] = std::clamp(lo, 0, w - 1);
    x1[ox] = std::clamp(lo + 1, 0, w - 1);
    wx[ox] = static_cast<T>(src - lo);
  }

  for (int bi = 0; bi < b; ++bi) {
    for (int ci = 0; ci < c; ++ci) {
      const T* in = input.data() + ((static_cast<std::int64_t>(bi) * c + ci) * h) * w;
      T* o = out.data() + ((static_cast<std::int64_t>(bi) * c + ci) * oh) * ow;
      for (int oy = 0; oy < oh; ++oy) {
        const T fy = wy[oy];
        for (int ox = 0; ox < ow; ++ox) {
          const T fx = wx[ox];
          const T v00 = in[static_cast<std::int64_t>(y0[oy]) * w + x0[ox]];
          const T v01 = in[static_cast<std::int64_t>(y0[oy]) * w + x1[ox]];
          const T v10 = in[static_cast<std::int64_t>(y1[oy]) * w + x0[ox]];
          const T v11 = in[static_cast<std::int64_t>(y1[oy]) * w + x1[ox]];
          o[static_cast<std::int64_t>(oy) * ow + ox] =
              (T(1) - fy) * ((T(1) - fx) * v00 + fx * v01) +
              fy * ((T(1) - fx) * v10 + fx * v11);
        }
      }
    }
  }
  return out;
}

template <typename T>
void upsample_bilinear_backward(const Shape& input_shape, int factor,
                                const TensorT<T>& grad_out,
                                TensorT<T>* grad_input) {
  if (!grad_input) return;
  const int b = input_shape[0], c = input_shape[1], h = input_shape[2],
            w = input_shape[3];
  const int oh = h * factor, ow = w * factor;
  const T* go = grad_out.data();
  for (int bi = 0; bi < b; ++bi) {
    for (int ci = 0; ci < c; ++ci) {
      T* gi = grad_input->data() + ((static_cast<std::int64_t>(bi) * c + ci) * h) * w;
      const T* g = go + ((static_cast<std::int64_t>(bi) * c + ci) * oh) * ow;
      for (int oy = 0; oy < oh; ++oy) {
        const double sy = (oy + 0.5) / factor - 0.5;
        const int ylo = static_cast<int>(std::floor(sy));
        const int yy0 = std::clamp(ylo, 0, h - 1);
        const int yy1 = std::clamp(ylo + 1, 0, h - 1);
        const T fy = static_cast<T>(sy - ylo);
        for (int ox = 0; ox < ow; ++ox) {
          const double sx = (ox + 0.5) / factor - 0.5;
          const int xlo = static_cast<int>(std::floor(sx));
          const int xx0 = std::clamp(xlo, 0, w - 1);
          const int xx1 = std::clamp(xlo + 1, 0, w - 1);
          const T fx = static_cast<T>(sx - xlo);
          const T gv = g[static_cast<std::int64_t>(oy) * ow + ox];
          gi[static_cast<std::int64_t>(yy0) * w + xx0] += (T(1) - fy) * (T(1) - fx) * gv;
          gi[static_cast<std::int64_t>(yy0) * w + xx1] += (T(1) - fy) * fx * gv;
          gi[static_cast<std::int64_t>(yy1) * w + xx0] += fy * (T(1) - fx) * gv;
          gi[static_cast<std::int64_t>(yy1) * w + xx1] += fy * fx * gv;
        }
      }
    }
  }
}

template <typename T>
TensorT<T> matmul(const TensorT<T>& a, const TensorT<T>& b) {
  require_rank(a, 2, "matmul lhs");
  require_rank(b, 2, "matmul rhs");
  const int m = a.dim(0), k = a.dim(1);
  const int k2 = b.dim(0), n = b.dim(1);
  if (k != k2) {
    throw ShapeError("matmul: inner dimensions disagree, " +
                     shape_str(a.shape()) + " x " + shape_str(b.shape()));
  }
  TensorT<T> out({m, n});
  const T* pa = a.data();
  const T* pb = b.data();
  T* po = out.data();
  for (int i = 0; i < m; ++i) {
    for (int kk = 0; kk < k; ++kk) {
      const T av = pa[static_cast<std::int64_t>(i) * k + kk];
      if (av == T(0)) continue;
      const T* brow = pb + static_cast<std::int64_t>(kk) * n;
      T* orow = po + static_cast<std::int64_t>(i) * n;
      for (int j = 0; j < n; ++j) orow[j] += av * brow[j];
    }
  }
  return out;
}

template <typename T>
void matmul_backward(const TensorT<T>& a, const TensorT<T>& b,
                     const TensorT<T>& grad_out, TensorT<T>* grad_a,
                     TensorT<T>* grad_b) {
  const int m = a.dim(0), k = a.dim(1), n = b.dim(1);
  const T* pa = a.data();
  const T* pb = b.data();
  const T* g = grad_out.data();
  if (grad_a) {
    // dA = G * B^T
    T* ga = grad_a->data();
    for (int i = 0; i < m; ++i) {
      for (int kk = 0; kk < k; ++kk) {
        T acc = 0;
        const T* grow = g + static_cast<std::int64_t>(i) * n;
        const T* brow = pb + static_cast<std::int64_t>(kk) * n;
        for (int j = 0; j < n; ++j) acc += grow[j] * brow[j];
        ga[static_cast<std::int64_t>(i) * k + kk] += acc;
      }
    }
  }
  if (grad_b) {
    // dB = A^T * G
    T* gb = grad_b->data();
    for (int kk = 0; kk < k; ++kk) {
      for (int i = 0; i < m; ++i) {
        const T av = pa[static_cast<std::int64_t>(i) * k + kk];
        if (av == T(0)) continue;
        const T* grow = g + static_cast<std::int64_t>(i) * n;
        T* gbrow = gb + static_cast<std::int64_t>(kk) * n;
        for (int j = 0; j < n; ++j) gbrow[j] += av * grow[j];
      }
    }
  }
}

template <typename T>
TensorT<T> softmax_flat(const TensorT<T>& x) {
  if (x.numel() < 1) throw ShapeError("softmax: empty input");
  TensorT<T> out(x.shape());
  const T* in = x.data();
  T* o = out.data();
  const std::int64_t n = x.numel();
  T mx = in[0];
  for (std::int64_t i = 1; i < n; ++i) mx = std::max(mx, in[i]);
  T denom = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    o[i] = std::exp(in[i] - mx);
    denom += o[i];
  }
  for (std::int64_t i = 0; i < n; ++i) o[i] /= denom;
  return out;
}

template <typename T>
TensorT<T> softmax_rows(const TensorT<T>& x) {
  require_rank(x, 2, "softmax_rows input");
  const int m = x.dim(0), n = x.dim(1);
  TensorT<T> out({m, n});
  for (int i = 0; i < m; ++i) {
    const T* in = x.data() + static_cast<std::int64_t>(i) * n;
    T* o = out.data() + static_cast<std::int64_t>(i) * n;
    T mx = in[0];
    for (int j = 1; j < n; ++j) mx = std::max(mx, in[j]);
    T denom = 0;
    for (int j = 0; j < n; ++j) {
      o[j] = std::exp(in[j] - mx);
      denom += o[j];
    }
    for (int j = 0; j < n; ++j) o[j] /= denom;
  }
  return out;
}

template <typename T>
void softmax_grouped_backward(const TensorT<T>& out, const TensorT<T>& grad_out,
                              std::int64_t rows, std::int64_t cols,
                              TensorT<T>* grad_in) {
  if (!grad_in) return;
  const T* y = out.data();
  const T* g = grad_out.data();
  T* gi = grad_in->data();
  for (std::int64_t r = 0; r < rows; ++r) {
    const T* yr = y + r * cols;
    const T* gr = g + r * cols;
    T dot = 0;
    for (std::int64_t j = 0; j < cols; ++j) dot += gr[j] * yr[j];
    T* gir = gi + r * cols;
    for (std::int64_t j = 0; j < cols; ++j) gir[j] += yr[j] * (gr[j] - dot);
  }
}

template <typename T>
TensorT<T> blur_symmetric(const TensorT<T>& input, const TensorT<T>& kernel) {
  require_rank(input, 4, "blur_symmetric input");
  require_rank(kernel, 2, "blur_symmetric kernel");
  const int b = input.dim(0), c = input.dim(1), h = input.dim(2),
            w = input.dim(3);
  const int kh = kernel.dim(0), kw = kernel.dim(1);
  const int cy = (kh - 1) / 2, cx = (kw - 1) / 2;
  TensorT<T> out(input.shape());
  const T* ker = kernel.data();
  for (int bi = 0; bi < b; ++bi) {
    for (int ci = 0; ci < c; ++ci) {
      const T* in = input.data() + ((static_cast<std::int64_t>(bi) * c + ci) * h) * w;
      T* o = out.data() + ((static_cast<std::int64_t>(bi) * c + ci) * h) * w;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          T acc = 0;
          for (int ky = 0; ky < kh; ++ky) {
            const int iy = reflect_symmetric(y + ky - cy, h);
            for (int kx = 0; kx < kw; ++kx) {
              const int ix = reflect_symmetric(x + kx - cx, w);
              acc += ker[ky * kw + kx] * in[static_cast<std::int64_t>(iy) * w + ix];
            }
          }
          o[static_cast<std::int64_t>(y) * w + x] = acc;
        }
      }
    }
  }
  return out;
}

template <typename T>
void blur_symmetric_backward(const TensorT<T>& input, const TensorT<T>& kernel,
                             const TensorT<T>& grad_out, TensorT<T>* grad_input,
                             TensorT<T>* grad_kernel) {
  const int b = input.dim(0), c = input.dim(1), h = input.dim(2),
            w = input.dim(3);
  const int kh = kernel.dim(0), kw = kernel.dim(1);
  const int cy = (kh - 1) / 2, cx = (kw - 1) / 2;
  const T* ker = kernel.data();
  for (int bi = 0; bi < b; ++bi) {
    for (int ci = 0; ci < c; ++ci) {
      const std::int64_t plane = ((static_cast<std::int64_t>(bi) * c + ci) * h) * w;
      const T* in = input.data() + plane;
      const T* g = grad_out.data() + plane;
      T* gi = grad_input ? grad_input->data() + plane : nullptr;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const T gv = g[static_cast<std::int64_t>(y) * w + x];
          if (gv == T(0)) continue;
          for (int ky = 0; ky < kh; ++ky) {
            const int iy = reflect_symmetric(y + ky - cy, h);
            for (int kx = 0; kx < kw; ++kx) {
              const int ix = reflect_symmetric(x + kx - cx, w);
              const std::int64_t ii = static_cast<std::int64_t>(iy) * w + ix;
              if (gi) gi[ii] += gv * ker[ky * kw + kx];
              if (grad_kernel) grad_kernel->data()[ky * kw + kx] += gv * in[ii];
            }
          }
        }
      }
    }
  }
}

template <typename T>
TensorT<T> decimate(const TensorT<T>& input, int s) {
  require_rank(input, 4, "decimate input");
  if (s < 1) throw ShapeError("decimate: scale must be >= 1");
  const int b = input.dim(0), c = input.dim(1), h = input.dim(2),
            w = input.dim(3);
  if (h % s != 0 || w % s != 0) {
    throw ShapeError("decimate: spatial extents " + shape_str(input.shape()) +
                     " not divisible by scale " + std::to_string(s));
  }
  const int oh = h / s, ow = w / s, phase = s / 2;
  TensorT<T> out({b, c, oh, ow});
  for (int bi = 0; bi < b; ++bi) {
    for (int ci = 0; ci < c; ++ci) {
      const T* in = input.data() + ((static_cast<std::int64_t>(bi) * c + ci) * h) * w;
      T* o = out.data() + ((static_cast<std::int64_t>(bi) * c + ci) * oh) * ow;
      for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
          o[static_cast<std::int64_t>(y) * ow + x] =
              in[static_cast<std::int64_t>(phase + y * s) * w + (phase + x * s)];
        }
      }
    }
  }
  return out;
}

template <typename T>
void decimate_backward(const Shape& input_shape, int s,
                       const TensorT<T>& grad_out, TensorT<T>* grad_input) {
  if (!grad_input) return;
  const int b = input_shape[0], c = input_shape[1], h = input_shape[2],
            w = input_shape[3];
  const int oh = h / s, ow = w / s, phase = s / 2;
  for (int bi = 0; bi < b; ++bi) {
    for (int ci = 0; ci < c; ++ci) {
      T* gi = grad_input->data() + ((static_cast<std::int64_t>(bi) * c + ci) * h) * w;
      const T* g =
          grad_out.data() + ((static_cast<std::int64_t>(bi) * c + ci) * oh) * ow;
      for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
          gi[static_cast<std::int64_t>(phase + y * s) * w + (phase + x * s)] +=
              g[static_cast<std::int64_t>(y) * ow + x];
        }
      }
    }
  }
}

template <typename T>
TensorT<T> channel_dot(const TensorT<T>& a, const TensorT<T>& b) {
  require_rank(a, 4, "channel_dot lhs");
  if (!a.same_shape(b)) {
    throw ShapeError("channel_dot: shapes differ, " + shape_str(a.shape()) +
                     " vs " + shape_str(b.shape()));
  }
  const int nb = a.dim(0), c = a.dim(1), h = a.dim(2), w = a.dim(3);
  TensorT<T> out({nb, 1, h, w});
  for (int bi = 0; bi < nb; ++bi) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        T acc = 0;
        for (int ci = 0; ci < c; ++ci) {
          acc += a.at(bi, ci, y, x) * b.at(bi, ci, y, x);
        }
        out.at(bi, 0, y, x) = acc;
      }
    }
  }
  return out;
}

template <typename T>
TensorT<T> channel_norm(const TensorT<T>& x) {
  require_rank(x, 4, "channel_norm input");
  const int nb = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  TensorT<T> out({nb, 1, h, w});
  for (int bi = 0; bi < nb; ++bi) {
    for (int y = 0; y < h; ++y) {
      for (int x2 = 0; x2 < w; ++x2) {
        T acc = 0;
        for (int ci = 0; ci < c; ++ci) {
          const T v = x.at(bi, ci, y, x2);
          acc += v * v;
        }
        out.at(bi, 0, y, x2) = std::sqrt(acc);
      }
    }
  }
  return out;
}

template <typename T>
T power_iteration_sigma(const TensorT<T>& w2d, const std::vector<T>& u_init,
                        int iters, std::vector<T>* u_out,
                        std::vector<T>* v_out) {
  require_rank(w2d, 2, "power_iteration matrix");
  if (iters < 1) throw ShapeError("power_iteration: iters must be positive");
  const int rows = w2d.dim(0), cols = w2d.dim(1);
  if (static_cast<int>(u_init.size()) != rows) {
    throw ShapeError("power_iteration: u length " +
                     std::to_string(u_init.size()) + " != rows " +
                     std::to_string(rows));
  }
  const T eps = static_cast<T>(1e-12);
  std::vector<T> u = u_init;
  std::vector<T> v(cols, T(0));
  const T* wd = w2d.data();
  for (int it = 0; it < iters; ++it) {
    // v = normalize(W^T u)
    for (int j = 0; j < cols; ++j) v[j] = T(0);
    for (int i = 0; i < rows; ++i) {
      const T ui = u[i];
      const T* row = wd + static_cast<std::int64_t>(i) * cols;
      for (int j = 0; j < cols; ++j) v[j] += row[j] * ui;
    }
    T nv = 0;
    for (int j = 0; j < cols; ++j) nv += v[j] * v[j];
    nv = std::sqrt(nv) + eps;
    for (int j = 0; j < cols; ++j) v[j] /= nv;
    // u = normalize(W v)
    for (int i = 0; i < rows; ++i) {
      const T* row = wd + static_cast<std::int64_t>(i) * cols;
      T acc = 0;
      for (int j = 0; j < cols; ++j) acc += row[j] * v[j];
      u[i] = acc;
    }
    T nu = 0;
    for (int i = 0; i < rows; ++i) nu += u[i] * u[i];
    nu = std::sqrt(nu) + eps;
    for (int i = 0; i < rows; ++i) u[i] /= nu;
  }
  // sigma = u^T W v
  T sigma = 0;
  for (int i = 0; i < rows; ++i) {
    const T* row = wd + static_cast<std::int64_t>(i) * cols;
    T acc = 0;
    for (int j = 0; j < cols; ++j) acc += row[j] * v[j];
    sigma += u[i] * acc;
  }
  if (u_out) *u_out = std::move(u);
  if (v_out) *v_out = std::move(v);
  return sigma;
}

#define SRF_INSTANTIATE_OPS(T)                                                 \
  template TensorT<T> conv2d<T>(const TensorT<T>&, const TensorT<T>&, int,     \
                                int);                                          \
  template void conv2d_backward<T>(const TensorT<T>&, const TensorT<T>&, int,  \
                                   int, const TensorT<T>&, TensorT<T>*,        \
                                   TensorT<T>*);                               \
  template TensorT<T> upsample_bilinear<T>(const TensorT<T>&, int);            \
  template void upsample_bilinear_backward<T>(const Shape&, int,               \
                                              const TensorT<T>&, TensorT<T>*); \
  template TensorT<T> matmul<T>(const TensorT<T>&, const TensorT<T>&);         \
  template void matmul_backward<T>(const TensorT<T>&, const TensorT<T>&,       \
                                   const TensorT<T>&, TensorT<T>*,             \
                                   TensorT<T>*);                               \
  template TensorT<T> softmax_flat<T>(const TensorT<T>&);                      \
  template TensorT<T> softmax_rows<T>(const TensorT<T>&);                      \
  template void softmax_grouped_backward<T>(const TensorT<T>&,                 \
                                            const TensorT<T>&, std::int64_t,   \
                                            std::int64_t, TensorT<T>*);        \
  template TensorT<T> blur_symmetric<T>(const TensorT<T>&, const TensorT<T>&); \
  template void blur_symmetric_backward<T>(const TensorT<T>&,                  \
                                           const TensorT<T>&,                  \
                                           const TensorT<T>&, TensorT<T>*,     \
                                           TensorT<T>*);                       \
  template TensorT<T> decimate<T>(const TensorT<T>&, int);                     \
  template void decimate_backward<T>(const Shape&, int, const TensorT<T>&,     \
                                     TensorT<T>*);                             \
  template TensorT<T> channel_dot<T>(const TensorT<T>&, const TensorT<T>&);    \
  template TensorT<T> channel_norm<T>(const TensorT<T>&);                      \
  template T power_iteration_sigma<T>(const TensorT<T>&,                       \
                                      const std::vector<T>&, int,              \
                                      std::vector<T>*, std::vector<T>*);

SRF_INSTANTIATE_OPS(float)
SRF_INSTANTIATE_OPS(double)

#undef SRF_INSTANTIATE_OPS

}  // namespace srf
