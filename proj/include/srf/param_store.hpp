#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "srf/autograd.hpp"

namespace srf {

// Adam optimizer state for one parameter tensor.
template <typename T>
struct AdamSlotT {
  std::int64_t t = 0;
  std::vector<T> m;
  std::vector<T> v;
};

// Named parameter registry with Adam state and spectral-norm u vectors.
// Iteration order is the sorted parameter name order everywhere, so update
// and serialization order is deterministic.
template <typename T>
class ParamStoreT {
 public:
  NodeRef<T> add(const std::string& name, TensorT<T> value);
  NodeRef<T> get(const std::string& name) const;
  bool has(const std::string& name) const { return params_.count(name) != 0; }
  std::vector<std::string> names() const;
  std::size_t size() const { return params_.size(); }

  void zero_grads();

  // One Adam update over all parameters whose name passes `filter`
  // (all parameters when `filter` is empty). Gradients of updated
  // parameters are cleared afterwards.
  void adam_step(T lr, T beta1, T beta2, T eps,
                 const std::function<bool(const std::string&)>& filter = {});

  AdamSlotT<T>& adam_slot(const std::string& name);

  // Persistent power-iteration left vector, created on first use as
  // ones/sqrt(rows).
  std::vector<T>& u_state(const std::string& name, int rows);
  bool has_u_state(const std::string& name) const {
    return u_states_.count(name) != 0;
  }
  const std::vector<T>& u_state_get(const std::string& name) const;
  std::vector<std::string> u_state_names() const;

 private:
  std::map<std::string, NodeRef<T>> params_;
  std::map<std::string, AdamSlotT<T>> adam_;
  std::map<std::string, std::vector<T>> u_states_;
};

using AdamSlot = AdamSlotT<double>;
using ParamStore = ParamStoreT<double>;
using ParamStoreF = ParamStoreT<float>;

extern template class ParamStoreT<float>;
extern template class ParamStoreT<double>;

}  // namespace srf
