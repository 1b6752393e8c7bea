#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "srf/errors.hpp"

namespace srf {

// Ordered list of extents, outermost axis first. Images use
// [batch, channels, height, width], matrices [rows, cols], kernels
// [c_out, c_in, kh, kw]. Rank 0 denotes a scalar (one element).
using Shape = std::vector<int>;

inline std::int64_t shape_numel(const Shape& s) {
  std::int64_t n = 1;
  for (int d : s) n *= d;
  return n;
}

inline std::string shape_str(const Shape& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += "x";
    out += std::to_string(s[i]);
  }
  return out + "]";
}

// Dense row-major tensor of rank 0..4 with value semantics.
template <typename T>
class TensorT {
 public:
  TensorT() = default;

  explicit TensorT(Shape shape) : shape_(std::move(shape)) {
    validate_shape();
    data_.assign(static_cast<std::size_t>(shape_numel(shape_)), T(0));
  }

  TensorT(Shape shape, std::vector<T> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    validate_shape();
    if (static_cast<std::int64_t>(data_.size()) != shape_numel(shape_)) {
      throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                       " does not match shape " + shape_str(shape_));
    }
  }

  static TensorT full(Shape shape, T v) {
    TensorT t(std::move(shape));
    for (T& x : t.data_) x = v;
    return t;
  }

  static TensorT scalar(T v) { return full(Shape{}, v); }

  bool defined() const { return !data_.empty(); }
  const Shape& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int dim(int axis) const { return shape_[static_cast<std::size_t>(axis)]; }
  std::int64_t numel() const { return static_cast<std::int64_t>(data_.size()); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::vector<T>& vec() { return data_; }
  const std::vector<T>& vec() const { return data_; }

  T& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
  T operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }

  std::int64_t index(int i0, int i1) const {
    return static_cast<std::int64_t>(i0) * shape_[1] + i1;
  }
  std::int64_t index(int i0, int i1, int i2) const {
    return (static_cast<std::int64_t>(i0) * shape_[1] + i1) * shape_[2] + i2;
  }
  std::int64_t index(int i0, int i1, int i2, int i3) const {
    return ((static_cast<std::int64_t>(i0) * shape_[1] + i1) * shape_[2] + i2) *
               shape_[3] +
           i3;
  }

  T& at(int i0, int i1) { return data_[index(i0, i1)]; }
  T at(int i0, int i1) const { return data_[index(i0, i1)]; }
  T& at(int i0, int i1, int i2) { return data_[index(i0, i1, i2)]; }
  T at(int i0, int i1, int i2) const { return data_[index(i0, i1, i2)]; }
  T& at(int i0, int i1, int i2, int i3) { return data_[index(i0, i1, i2, i3)]; }
  T at(int i0, int i1, int i2, int i3) const {
    return data_[index(i0, i1, i2, i3)];
  }

  bool same_shape(const TensorT& other) const { return shape_ == other.shape_; }

  // Same data, new extents; element count must be preserved.
  TensorT reshaped(Shape shape) const {
    if (shape_numel(shape) != numel()) {
      throw ShapeError("cannot reshape " + shape_str(shape_) + " to " +
                       shape_str(shape));
    }
    return TensorT(std::move(shape), data_);
  }

  bool all_finite() const {
    for (const T& x : data_) {
      if (!std::isfinite(static_cast<double>(x))) return false;
    }
    return true;
  }

  void fill(T v) {
    for (T& x : data_) x = v;
  }

 private:
  void validate_shape() const {
    if (shape_.size() > 4) {
      throw ShapeError("tensor rank " + std::to_string(shape_.size()) +
                       " exceeds the supported maximum of 4");
    }
    for (int d : shape_) {
      if (d <= 0) {
        throw ShapeError("tensor shape " + shape_str(shape_) +
                         " has a non-positive extent");
      }
    }
  }

  Shape shape_;
  std::vector<T> data_;
};

using Tensor = TensorT<double>;
using TensorF = TensorT<float>;

template <typename To, typename From>
TensorT<To> tensor_cast(const TensorT<From>& src) {
  std::vector<To> out(src.vec().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<To>(src.vec()[i]);
  }
  return TensorT<To>(src.shape(), std::move(out));
}

}  // namespace srf
