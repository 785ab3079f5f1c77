#include "gw/ad/parameters.hpp"

#include "gw/core/error.hpp"

namespace gw::ad {

Parameter& ParameterStore::add(std::string name, Shape shape) {
  if (find(name)) throw ConfigError("duplicate parameter name '" + name + "'");
  Parameter p;
  p.name = std::move(name);
  p.value = Tensor(shape);
  p.grad = Tensor(std::move(shape));
  params_.push_back(std::move(p));
  return params_.back();
}

Parameter* ParameterStore::find(std::string_view name) {
  for (auto& p : params_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

Parameter& ParameterStore::get(std::string_view name) {
  if (Parameter* p = find(name)) return *p;
  throw NotFound("no parameter named '" + std::string(name) + "'");
}

const Parameter& ParameterStore::get(std::string_view name) const {
  for (const auto& p : params_) {
    if (p.name == name) return p;
  }
  throw NotFound("no parameter named '" + std::string(name) + "'");
}

std::vector<Parameter*> ParameterStore::all() {
  std::vector<Parameter*> out;
  for (auto& p : params_) out.push_back(&p);
  return out;
}

std::vector<const Parameter*> ParameterStore::all() const {
  std::vector<const Parameter*> out;
  for (const auto& p : params_) out.push_back(&p);
  return out;
}

std::size_t ParameterStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

void ParameterStore::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

std::vector<Tensor> ParameterStore::snapshot() const {
  std::vector<Tensor> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.push_back(p.value);
  return out;
}

void ParameterStore::restore(const std::vector<Tensor>& values) {
  if (values.size() != params_.size()) throw ConfigError("snapshot size mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].shape() != params_[i].value.shape()) {
      throw ConfigError("snapshot shape mismatch for '" + params_[i].name + "'");
    }
    params_[i].value = values[i];
  }
}

}  // namespace gw::ad
