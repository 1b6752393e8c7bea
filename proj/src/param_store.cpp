#include "srf/param_store.hpp"

#include "srf/errors.hpp"

namespace srf {

template <typename T>
NodeRef<T> ParamStoreT<T>::add(const std::string& name, TensorT<T> value) {
  if (params_.count(name)) {
    throw ConfigError("parameter already registered: " + name);
  }
  NodeRef<T> node = make_parameter(std::move(value));
  params_[name] = node;
  AdamSlotT<T>& slot = adam_[name];
  slot.t = 0;
  slot.m.assign(node->value.numel(), T(0));
  slot.v.assign(node->value.numel(), T(0));
  return node;
}

template <typename T>
NodeRef<T> ParamStoreT<T>::get(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) {
    throw ConfigError("unknown parameter: " + name);
  }
  return it->second;
}

template <typename T>
std::vector<std::string> ParamStoreT<T>::names() const {
  std::vector<std::string> out;
  out.reserve(params_.size());
  for (const auto& kv : params_) out.push_back(kv.first);
  return out;
}

template <typename T>
void ParamStoreT<T>::zero_grads() {
  for (auto& kv : params_) {
    NodeT<T>& p = *kv.second;
    if (p.grad.defined()) p.grad.fill(T(0));
  }
}

template <typename T>
void ParamStoreT<T>::adam_step(
    T lr, T beta1, T beta2, T eps,
    const std::function<bool(const std::string&)>& filter) {
  for (auto& kv : params_) {
    if (filter && !filter(kv.first)) continue;
    NodeT<T>& p = *kv.second;
    if (!p.grad.defined()) continue;
    AdamSlotT<T>& slot = adam_[kv.first];
    slot.t += 1;
    const T bc1 = T(1) - std::pow(beta1, static_cast<T>(slot.t));
    const T bc2 = T(1) - std::pow(beta2, static_cast<T>(slot.t));
    T* val = p.value.data();
    T* g = p.grad.data();
    const std::int64_t n = p.value.numel();
    for (std::int64_t i = 0; i < n; ++i) {
      slot.m[i] = beta1 * slot.m[i] + (T(1) - beta1) * g[i];
      slot.v[i] = beta2 * slot.v[i] + (T(1) - beta2) * g[i] * g[i];
      const T mhat = slot.m[i] / bc1;
      const T vhat = slot.v[i] / bc2;
      val[i] -= lr * mhat / (std::sqrt(vhat) + eps);
      g[i] = T(0);
    }
  }
}

template <typename T>
AdamSlotT<T>& ParamStoreT<T>::adam_slot(const std::string& name) {
  auto it = adam_.find(name);
  if (it == adam_.end()) {
    throw ConfigError("unknown parameter: " + name);
  }
  return it->second;
}

template <typename T>
std::vector<T>& ParamStoreT<T>::u_state(const std::string& name, int rows) {
  auto it = u_states_.find(name);
  if (it == u_states_.end()) {
    std::vector<T> u(rows, T(1) / std::sqrt(static_cast<T>(rows)));
    it = u_states_.emplace(name, std::move(u)).first;
  } else if (static_cast<int>(it->second.size()) != rows) {
    throw ShapeError("u_state size mismatch for " + name);
  }
  return it->second;
}

template <typename T>
const std::vector<T>& ParamStoreT<T>::u_state_get(
    const std::string& name) const {
  auto it = u_states_.find(name);
  if (it == u_states_.end()) {
    throw ConfigError("unknown u_state: " + name);
  }
  return it->second;
}

template <typename T>
std::vector<std::string> ParamStoreT<T>::u_state_names() const {
  std::vector<std::string> out;
  out.reserve(u_states_.size());
  for (const auto& kv : u_states_) out.push_back(kv.first);
  return out;
}

template class ParamStoreT<float>;
template class ParamStoreT<double>;

}  // namespace srf
