#pragma once

#include <deque>
#include <string>
#include <string_view>
#include <vector>

#include "gw/ad/tensor.hpp"

namespace gw::ad {

struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  void zero_grad() { grad.fill(0.0); }
};

// Named trainable tensors in registration order. Element addresses survive
// insertion and moves of the store, so graphs and models may hold Parameter
// pointers into it (copies get fresh addresses).
class ParameterStore {
 public:
  // Throws ConfigError on a duplicate name.
  Parameter& add(std::string name, Shape shape);

  Parameter& get(std::string_view name);
  const Parameter& get(std::string_view name) const;
  Parameter* find(std::string_view name);

  std::vector<Parameter*> all();
  std::vector<const Parameter*> all() const;
  std::size_t size() const { return params_.size(); }
  std::size_t scalar_count() const;

  void zero_grad();

  // Value snapshot in registration order, used for best-epoch retention.
  std::vector<Tensor> snapshot() const;
  void restore(const std::vector<Tensor>& values);

 private:
  std::deque<Parameter> params_;
};

}  // namespace gw::ad
