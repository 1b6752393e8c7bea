#include "srf/autograd.hpp"

#include <cmath>
#include <unordered_set>
#include <utility>

#include "srf/tensor_ops.hpp"

namespace srf {

namespace {

template <typename T>
NodeRef<T> make_node(TensorT<T> value, std::vector<NodeRef<T>> parents,
                     std::function<void(NodeT<T>&)> fn) {
  auto out = std::make_shared<NodeT<T>>();
  out->value = std::move(value);
  bool req = false;
  for (const auto& p : parents) req = req || p->requires_grad;
  out->requires_grad = req;
  if (req) {
    out->parents = std::move(parents);
    out->backward_fn = std::move(fn);
  }
  return out;
}

template <typename T>
void require_same_shape(const NodeRef<T>& a, const NodeRef<T>& b,
                        const char* what) {
  if (!a->value.same_shape(b->value)) {
    throw ShapeError(std::string(what) + ": shapes differ, " +
                     shape_str(a->value.shape()) + " vs " +
                     shape_str(b->value.shape()));
  }
}

template <typename T>
void accumulate(TensorT<T>& dst, const TensorT<T>& src) {
  T* d = dst.data();
  const T* s = src.data();
  const std::int64_t n = dst.numel();
  for (std::int64_t i = 0; i < n; ++i) d[i] += s[i];
}

constexpr double kArccosClamp = 1e-7;

}  // namespace

template <typename T>
NodeRef<T> make_constant(TensorT<T> value) {
  auto out = std::make_shared<NodeT<T>>();
  out->value = std::move(value);
  out->requires_grad = false;
  return out;
}

template <typename T>
NodeRef<T> make_parameter(TensorT<T> value) {
  auto out = std::make_shared<NodeT<T>>();
  out->value = std::move(value);
  out->requires_grad = true;
  return out;
}

template <typename T>
NodeRef<T> add(const NodeRef<T>& a, const NodeRef<T>& b) {
  require_same_shape(a, b, "add");
  TensorT<T> v(a->value.shape());
  for (std::int64_t i = 0; i < v.numel(); ++i) v[i] = a->value[i] + b->value[i];
  NodeT<T>* ap = a.get();
  NodeT<T>* bp = b.get();
  return make_node<T>(std::move(v), {a, b}, [ap, bp](NodeT<T>& self) {
    if (ap->requires_grad) accumulate(ap->ensure_grad(), self.grad);
    if (bp->requires_grad) accumulate(bp->ensure_grad(), self.grad);
  });
}

template <typename T>
NodeRef<T> sub(const NodeRef<T>& a, const NodeRef<T>& b) {
  require_same_shape(a, b, "sub");
  TensorT<T> v(a->value.shape());
  for (std::int64_t i = 0; i < v.numel(); ++i) v[i] = a->value[i] - b->value[i];
  NodeT<T>* ap = a.get();
  NodeT<T>* bp = b.get();
  return make_node<T>(std::move(v), {a, b}, [ap, bp](NodeT<T>& self) {
    if (ap->requires_grad) accumulate(ap->ensure_grad(), self.grad);
    if (bp->requires_grad) {
      TensorT<T>& g = bp->ensure_grad();
      for (std::int64_t i = 0; i < g.numel(); ++i) g[i] -= self.grad[i];
    }
  });
}

template <typename T>
NodeRef<T> mul(const NodeRef<T>& a, const NodeRef<T>& b) {
  require_same_shape(a, b, "mul");
  TensorT<T> v(a->value.shape());
  for (std::int64_t i = 0; i < v.numel(); ++i) v[i] = a->value[i] * b->value[i];
  NodeT<T>* ap = a.get();
  NodeT<T>* bp = b.get();
  return make_node<T>(std::move(v), {a, b}, [ap, bp](NodeT<T>& self) {
    if (ap->requires_grad) {
      TensorT<T>& g = ap->ensure_grad();
      for (std::int64_t i = 0; i < g.numel(); ++i)
        g[i] += self.grad[i] * bp->value[i];
    }
    if (bp->requires_grad) {
      TensorT<T>& g = bp->ensure_grad();
      for (std::int64_t i = 0; i < g.numel(); ++i)
        g[i] += self.grad[i] * ap->value[i];
    }
  });
}

template <typename T>
NodeRef<T> div(const NodeRef<T>& a, const NodeRef<T>& b) {
  require_same_shape(a, b, "div");
  TensorT<T> v(a->value.shape());
  for (std::int64_t i = 0; i < v.numel(); ++i) v[i] = a->value[i] / b->value[i];
  NodeT<T>* ap = a.get();
  NodeT<T>* bp = b.get();
  return make_node<T>(std::move(v), {a, b}, [ap, bp](NodeT<T>& self) {
    if (ap->requires_grad) {
      TensorT<T>& g = ap->ensure_grad();
      for (std::int64_t i = 0; i < g.numel(); ++i)
        g[i] += self.grad[i] / bp->value[i];
    }
    if (bp->requires_grad) {
      TensorT<T>& g = bp->ensure_grad();
      for (std::int64_t i = 0; i < g.numel(); ++i) {
        const T bv = bp->value[i];
        g[i] -= self.grad[i] * ap->value[i] / (bv * bv);
      }
    }
  });
}

template <typename T>
NodeRef<T> scale(const NodeRef<T>& a, T factor) {
  TensorT<T> v(a->value.shape());
  for (std::int64_t i = 0; i < v.numel(); ++i) v[i] = a->value[i] * factor;
  NodeT<T>* ap = a.get();
  return make_node<T>(std::move(v), {a}, [ap, factor](NodeT<T>& self) {
    TensorT<T>& g = ap->ensure_grad();
    for (std::int64_t i = 0; i < g.numel(); ++i) g[i] += self.grad[i] * factor;
  });
}

template <typename T>
NodeRef<T> add_scalar(const NodeRef<T>& a, T constant) {
  TensorT<T> v(a->value.shape());
  for (std::int64_t i = 0; i < v.numel(); ++i) v[i] = a->value[i] + constant;
  NodeT<T>* ap = a.get();
  return make_node<T>(std::move(v), {a}, [ap](NodeT<T>& self) {
    accumulate(ap->ensure_grad(), self.grad);
  });
}

template <typename T>
NodeRef<T> relu(const NodeRef<T>& a) {
  TensorT<T> v(a->value.shape());
  for (std::int64_t i = 0; i < v.numel(); ++i)
    v[i] = a->value[i] > T(0) ? a->value[i] : T(0);
  NodeT<T>* ap = a.get();
  return make_node<T>(std::move(v), {a}, [ap](NodeT<T>& self) {
    TensorT<T>& g = ap->ensure_grad();
    for (std::int64_t i = 0; i < g.numel(); ++i) {
      if (ap->value[i] > T(0)) g[i] += self.grad[i];
    }
  });
}

template <typename T>
NodeRef<T> arccos_clamped(const NodeRef<T>& a) {
  const T lo = T(-1) + static_cast<T>(kArccosClamp);
  const T hi = T(1) - static_cast<T>(kArccosClamp);
  TensorT<T> v(a->value.shape());
  for (std::int64_t i = 0; i < v.numel(); ++i) {
    const T x = std::min(hi, std::max(lo, a->value[i]));
    v[i] = std::acos(x);
  }
  NodeT<T>* ap = a.get();
  return make_node<T>(std::move(v), {a}, [ap, lo, hi](NodeT<T>& self) {
    TensorT<T>& g = ap->ensure_grad();
    for (std::int64_t i = 0; i < g.numel(); ++i) {
      const T x = ap->value[i];
      if (x <= lo || x >= hi) continue;  // clamp active: zero slope
      g[i] += self.grad[i] * (-T(1) / std::sqrt(T(1) - x * x));
    }
  });
}

template <typename T>
NodeRef<T> sum(const NodeRef<T>& a) {
  T acc = 0;
  for (std::int64_t i = 0; i < a->value.numel(); ++i) acc += a->value[i];
  NodeT<T>* ap = a.get();
  return make_node<T>(TensorT<T>::scalar(acc), {a}, [ap](NodeT<T>& self) {
    const T g = self.grad[0];
    TensorT<T>& pg = ap->ensure_grad();
    for (std::int64_t i = 0; i < pg.numel(); ++i) pg[i] += g;
  });
}

template <typename T>
NodeRef<T> abs_sum(const NodeRef<T>& a) {
  T acc = 0;
  for (std::int64_t i = 0; i < a->value.numel(); ++i)
    acc += std::abs(a->value[i]);
  NodeT<T>* ap = a.get();
  return make_node<T>(TensorT<T>::scalar(acc), {a}, [ap](NodeT<T>& self) {
    const T g = self.grad[0];
    TensorT<T>& pg = ap->ensure_grad();
    for (std::int64_t i = 0; i < pg.numel(); ++i) {
      const T x = ap->value[i];
      if (x > T(0)) {
        pg[i] += g;
      } else if (x < T(0)) {
        pg[i] -= g;
      }
    }
  });
}

template <typename T>
NodeRef<T> mean(const NodeRef<T>& a) {
  return scale(sum(a), T(1) / static_cast<T>(a->value.numel()));
}

template <typename T>
NodeRef<T> mean_abs(const NodeRef<T>& a) {
  return scale(abs_sum(a), T(1) / static_cast<T>(a->value.numel()));
}

template <typename T>
NodeRef<T> reshape(const NodeRef<T>& a, Shape shape) {
  TensorT<T> v = a->value.reshaped(std::move(shape));
  NodeT<T>* ap = a.get();
  return make_node<T>(std::move(v), {a}, [ap](NodeT<T>& self) {
    TensorT<T>& pg = ap->ensure_grad();
    for (std::int64_t i = 0; i < pg.numel(); ++i) pg[i] += self.grad[i];
  });
}

template <typename T>
NodeRef<T> concat_channels(const NodeRef<T>& a, const NodeRef<T>& b) {
  const TensorT<T>& av = a->value;
  const TensorT<T>& bv = b->value;
  if (av.rank() != 4 || bv.rank() != 4) {
    throw ShapeError("concat_channels: expected rank-4 inputs, got " +
                     shape_str(av.shape()) + " and " + shape_str(bv.shape()));
  }
  if (av.dim(0) != bv.dim(0) || av.dim(2) != bv.dim(2) ||
      av.dim(3) != bv.dim(3)) {
    throw ShapeError("concat_channels: spatial extents differ, " +
                     shape_str(av.shape()) + " vs " + shape_str(bv.shape()));
  }
  const int nb = av.dim(0), c1 = av.dim(1), c2 = bv.dim(1), h = av.dim(2),
            w = av.dim(3);
  TensorT<T> v({nb, c1 + c2, h, w});
  const std::int64_t plane = static_cast<std::int64_t>(h) * w;
  for (int bi = 0; bi < nb; ++bi) {
    T* dst = v.data() + static_cast<std::int64_t>(bi) * (c1 + c2) * plane;
    const T* sa = av.data() + static_cast<std::int64_t>(bi) * c1 * plane;
    const T* sb = bv.data() + static_cast<std::int64_t>(bi) * c2 * plane;
    for (std::int64_t i = 0; i < c1 * plane; ++i) dst[i] = sa[i];
    for (std::int64_t i = 0; i < c2 * plane; ++i) dst[c1 * plane + i] = sb[i];
  }
  NodeT<T>* ap = a.get();
  NodeT<T>* bp = b.get();
  return make_node<T>(
      std::move(v), {a, b}, [ap, bp, nb, c1, c2, plane](NodeT<T>& self) {
        for (int bi = 0; bi < nb; ++bi) {
          const T* g =
              self.grad.data() + static_cast<std::int64_t>(bi) * (c1 + c2) * plane;
          if (ap->requires_grad) {
            T* ga = ap->ensure_grad().data() +
                    static_cast<std::int64_t>(bi) * c1 * plane;
            for (std::int64_t i = 0; i < c1 * plane; ++i) ga[i] += g[i];
          }
          if (bp->requires_grad) {
            T* gb = bp->ensure_grad().data() +
                    static_cast<std::int64_t>(bi) * c2 * plane;
            for (std::int64_t i = 0; i < c2 * plane; ++i)
              gb[i] += g[c1 * plane + i];
          }
        }
      });
}

template <typename T>
NodeRef<T> conv2d(const NodeRef<T>& input, const NodeRef<T>& kernel, int stride,
                  int padding) {
  TensorT<T> v = conv2d(input->value, kernel->value, stride, padding);
  NodeT<T>* ip = input.get();
  NodeT<T>* kp = kernel.get();
  return make_node<T>(std::move(v), {input, kernel},
                      [ip, kp, stride, padding](NodeT<T>& self) {
                        conv2d_backward(
                            ip->value, kp->value, stride, padding, self.grad,
                            ip->requires_grad ? &ip->ensure_grad() : nullptr,
                            kp->requires_grad ? &kp->ensure_grad() : nullptr);
                      });
}

template <typename T>
NodeRef<T> upsample_bilinear(const NodeRef<T>& input, int factor) {
  TensorT<T> v = upsample_bilinear(input->value, factor);
  NodeT<T>* ip = input.get();
  const Shape in_shape = input->value.shape();
  return make_node<T>(std::move(v), {input},
                      [ip, factor, in_shape](NodeT<T>& self) {
                        upsample_bilinear_backward(in_shape, factor, self.grad,
                                                   &ip->ensure_grad());
                      });
}

template <typename T>
NodeRef<T> matmul(const NodeRef<T>& a, const NodeRef<T>& b) {
  TensorT<T> v = matmul(a->value, b->value);
  NodeT<T>* ap = a.get();
  NodeT<T>* bp = b.get();
  return make_node<T>(std::move(v), {a, b}, [ap, bp](NodeT<T>& self) {
    matmul_backward(ap->value, bp->value, self.grad,
                    ap->requires_grad ? &ap->ensure_grad() : nullptr,
                    bp->requires_grad ? &bp->ensure_grad() : nullptr);
  });
}

template <typename T>
NodeRef<T> softmax_flat(const NodeRef<T>& a) {
  TensorT<T> v = softmax_flat(a->value);
  NodeT<T>* ap = a.get();
  const std::int64_t n = v.numel();
  return make_node<T>(std::move(v), {a}, [ap, n](NodeT<T>& self) {
    softmax_grouped_backward(self.value, self.grad, 1, n, &ap->ensure_grad());
  });
}

template <typename T>
NodeRef<T> softmax_rows(const NodeRef<T>& a) {
  TensorT<T> v = softmax_rows(a->value);
  NodeT<T>* ap = a.get();
  const std::int64_t rows = v.dim(0), cols = v.dim(1);
  return make_node<T>(std::move(v), {a}, [ap, rows, cols](NodeT<T>& self) {
    softmax_grouped_backward(self.value, self.grad, rows, cols,
                             &ap->ensure_grad());
  });
}

template <typename T>
NodeRef<T> add_rowvec(const NodeRef<T>& a, const NodeRef<T>& v) {
  if (a->value.rank() != 2 || v->value.rank() != 1 ||
      v->value.dim(0) != a->value.dim(1)) {
    throw ShapeError("add_rowvec: need [m,n] + [n], got " +
                     shape_str(a->value.shape()) + " and " +
                     shape_str(v->value.shape()));
  }
  const int m = a->value.dim(0), n = a->value.dim(1);
  TensorT<T> out({m, n});
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      out.at(i, j) = a->value.at(i, j) + v->value[j];
    }
  }
  NodeT<T>* ap = a.get();
  NodeT<T>* vp = v.get();
  return make_node<T>(std::move(out), {a, v}, [ap, vp, m, n](NodeT<T>& self) {
    if (ap->requires_grad) accumulate(ap->ensure_grad(), self.grad);
    if (vp->requires_grad) {
      TensorT<T>& g = vp->ensure_grad();
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) g[j] += self.grad.at(i, j);
      }
    }
  });
}

template <typename T>
NodeRef<T> blur_symmetric(const NodeRef<T>& input, const NodeRef<T>& kernel) {
  TensorT<T> v = blur_symmetric(input->value, kernel->value);
  NodeT<T>* ip = input.get();
  NodeT<T>* kp = kernel.get();
  return make_node<T>(std::move(v), {input, kernel}, [ip, kp](NodeT<T>& self) {
    blur_symmetric_backward(ip->value, kp->value, self.grad,
                            ip->requires_grad ? &ip->ensure_grad() : nullptr,
                            kp->requires_grad ? &kp->ensure_grad() : nullptr);
  });
}

template <typename T>
NodeRef<T> decimate(const NodeRef<T>& input, int s) {
  TensorT<T> v = decimate(input->value, s);
  NodeT<T>* ip = input.get();
  const Shape in_shape = input->value.shape();
  return make_node<T>(std::move(v), {input}, [ip, s, in_shape](NodeT<T>& self) {
    decimate_backward(in_shape, s, self.grad, &ip->ensure_grad());
  });
}

template <typename T>
NodeRef<T> channel_dot(const NodeRef<T>& a, const NodeRef<T>& b) {
  TensorT<T> v = channel_dot(a->value, b->value);
  NodeT<T>* ap = a.get();
  NodeT<T>* bp = b.get();
  const int nb = a->value.dim(0), c = a->value.dim(1), h = a->value.dim(2),
            w = a->value.dim(3);
  return make_node<T>(std::move(v), {a, b}, [ap, bp, nb, c, h, w](NodeT<T>& self) {
    for (int bi = 0; bi < nb; ++bi) {
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const T g = self.grad.at(bi, 0, y, x);
          if (g == T(0)) continue;
          for (int ci = 0; ci < c; ++ci) {
            if (ap->requires_grad)
              ap->ensure_grad().at(bi, ci, y, x) += g * bp->value.at(bi, ci, y, x);
            if (bp->requires_grad)
              bp->ensure_grad().at(bi, ci, y, x) += g * ap->value.at(bi, ci, y, x);
          }
        }
      }
    }
  });
}

template <typename T>
NodeRef<T> channel_norm(const NodeRef<T>& a) {
  TensorT<T> v = channel_norm(a->value);
  NodeT<T>* ap = a.get();
  const int nb = a->value.dim(0), c = a->value.dim(1), h = a->value.dim(2),
            w = a->value.dim(3);
  return make_node<T>(std::move(v), {a}, [ap, nb, c, h, w](NodeT<T>& self) {
    TensorT<T>& pg = ap->ensure_grad();
    for (int bi = 0; bi < nb; ++bi) {
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const T norm = self.value.at(bi, 0, y, x);
          if (norm <= T(0)) continue;  // zero spectrum: subgradient 0
          const T g = self.grad.at(bi, 0, y, x) / norm;
          for (int ci = 0; ci < c; ++ci) {
            pg.at(bi, ci, y, x) += g * ap->value.at(bi, ci, y, x);
          }
        }
      }
    }
  });
}

template <typename T>
NodeRef<T> spectral_normalize(const NodeRef<T>& weight, T lambda, int iters,
                              std::vector<T>& u_state, bool update_u,
                              bool detach_sigma) {
  const TensorT<T>& w = weight->value;
  int rows = 0, cols = 0;
  if (w.rank() == 2) {
    rows = w.dim(0);
    cols = w.dim(1);
  } else if (w.rank() == 4) {
    rows = w.dim(0);
    cols = w.dim(1) * w.dim(2) * w.dim(3);
  } else {
    throw ShapeError("spectral_normalize: expected rank-2 or rank-4 weight, got " +
                     shape_str(w.shape()));
  }
  if (!(lambda > T(0)) || lambda > T(1)) {
    throw ConfigError("spectral_normalize: lambda must be in (0, 1]");
  }
  if (u_state.empty()) {
    u_state.assign(rows, T(1) / std::sqrt(static_cast<T>(rows)));
  }
  const TensorT<T> w2d = w.reshaped({rows, cols});
  std::vector<T> u, v;
  const T sigma = power_iteration_sigma(w2d, u_state, iters, &u, &v);
  if (update_u) u_state = u;

  const T denom = sigma + static_cast<T>(1e-12);
  const T factor = lambda / denom;
  TensorT<T> out(w.shape());
  for (std::int64_t i = 0; i < out.numel(); ++i) out[i] = w[i] * factor;

  NodeT<T>* wp = weight.get();
  return make_node<T>(
      std::move(out), {weight},
      [wp, factor, denom, lambda, detach_sigma, u = std::move(u),
       v = std::move(v), rows, cols](NodeT<T>& self) {
        TensorT<T>& pg = wp->ensure_grad();
        if (detach_sigma) {
          for (std::int64_t i = 0; i < pg.numel(); ++i)
            pg[i] += self.grad[i] * factor;
          return;
        }
        // d(out)/dW with sigma = u^T W v (u, v constant):
        //   factor * I - (lambda / denom^2) * W (x) (u v^T)
        T inner = 0;
        for (std::int64_t i = 0; i < pg.numel(); ++i)
          inner += self.grad[i] * wp->value[i];
        const T c2 = lambda / (denom * denom) * inner;
        for (int i = 0; i < rows; ++i) {
          for (int j = 0; j < cols; ++j) {
            const std::int64_t idx = static_cast<std::int64_t>(i) * cols + j;
            pg[idx] += self.grad[idx] * factor - c2 * u[i] * v[j];
          }
        }
      });
}

template <typename T>
void backward(const NodeRef<T>& loss) {
  if (loss->value.numel() != 1) {
    throw ShapeError("backward: loss must be scalar, got shape " +
                     shape_str(loss->value.shape()));
  }
  if (!loss->requires_grad) return;  // nothing trainable reachable

  // iterative postorder DFS over grad-requiring nodes
  std::vector<NodeT<T>*> order;
  std::unordered_set<NodeT<T>*> visited;
  std::vector<std::pair<NodeT<T>*, std::size_t>> stack;
  visited.insert(loss.get());
  stack.emplace_back(loss.get(), 0);
  while (!stack.empty()) {
    auto& top = stack.back();
    if (top.second < top.first->parents.size()) {
      NodeT<T>* p = top.first->parents[top.second].get();
      ++top.second;
      if (p->requires_grad && visited.insert(p).second) {
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(top.first);
      stack.pop_back();
    }
  }

  loss->ensure_grad()[0] += T(1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NodeT<T>* n = *it;
    if (n->backward_fn) {
      n->ensure_grad();
      n->backward_fn(*n);
    }
  }
}

#define SRF_INSTANTIATE_AUTOGRAD(T)                                           \
  template NodeRef<T> make_constant<T>(TensorT<T>);                           \
  template NodeRef<T> make_parameter<T>(TensorT<T>);                          \
  template NodeRef<T> add<T>(const NodeRef<T>&, const NodeRef<T>&);           \
  template NodeRef<T> sub<T>(const NodeRef<T>&, const NodeRef<T>&);           \
  template NodeRef<T> mul<T>(const NodeRef<T>&, const NodeRef<T>&);           \
  template NodeRef<T> div<T>(const NodeRef<T>&, const NodeRef<T>&);           \
  template NodeRef<T> scale<T>(const NodeRef<T>&, T);                         \
  template NodeRef<T> add_scalar<T>(const NodeRef<T>&, T);                    \
  template NodeRef<T> relu<T>(const NodeRef<T>&);                             \
  template NodeRef<T> arccos_clamped<T>(const NodeRef<T>&);                   \
  template NodeRef<T> sum<T>(const NodeRef<T>&);                              \
  template NodeRef<T> abs_sum<T>(const NodeRef<T>&);                          \
  template NodeRef<T> mean<T>(const NodeRef<T>&);                             \
  template NodeRef<T> mean_abs<T>(const NodeRef<T>&);                         \
  template NodeRef<T> reshape<T>(const NodeRef<T>&, Shape);                   \
  template NodeRef<T> concat_channels<T>(const NodeRef<T>&, const NodeRef<T>&); \
  template NodeRef<T> conv2d<T>(const NodeRef<T>&, const NodeRef<T>&, int,    \
                                int);                                         \
  template NodeRef<T> upsample_bilinear<T>(const NodeRef<T>&, int);           \
  template NodeRef<T> matmul<T>(const NodeRef<T>&, const NodeRef<T>&);        \
  template NodeRef<T> softmax_flat<T>(const NodeRef<T>&);                     \
  template NodeRef<T> softmax_rows<T>(const NodeRef<T>&);                     \
  template NodeRef<T> add_rowvec<T>(const NodeRef<T>&, const NodeRef<T>&);    \
  template NodeRef<T> blur_symmetric<T>(const NodeRef<T>&, const NodeRef<T>&); \
  template NodeRef<T> decimate<T>(const NodeRef<T>&, int);                    \
  template NodeRef<T> channel_dot<T>(const NodeRef<T>&, const NodeRef<T>&);   \
  template NodeRef<T> channel_norm<T>(const NodeRef<T>&);                     \
  template NodeRef<T> spectral_normalize<T>(const NodeRef<T>&, T, int,        \
                                            std::vector<T>&, bool, bool);     \
  template void backward<T>(const NodeRef<T>&);

SRF_INSTANTIATE_AUTOGRAD(float)
SRF_INSTANTIATE_AUTOGRAD(double)

#undef SRF_INSTANTIATE_AUTOGRAD

}  // namespace srf
